//! Acceptance criteria 1–7. Prints one line per criterion and exits nonzero if
//! any fails. Each criterion's wall-clock budget is part of the criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use steinweil::characters;
use steinweil::cli::cache::{self, CacheKey, CacheRead};
use steinweil::cli::{run, Args, RunConfig};
use steinweil::error::Result;
use steinweil::ffield::{AdditiveCharacter, Fe, Field, FieldDescriptor};
use steinweil::outcome::{Status, Verdict};
use steinweil::spgroup::{self, SymplecticSpace, WeylGroup};
use steinweil::steinberg::{self, identities, submodules, SteinbergModule};
use steinweil::weilmod;

const CAP: u128 = 1 << 24;

struct Setup {
    s: SymplecticSpace,
    f: Field,
    lam: AdditiveCharacter,
}

/// F_q with q prime and the smallest F_{2^m} containing p-th roots of unity.
fn setup(n: usize, q: u32) -> Setup {
    let fq = FieldDescriptor::create(q, 1, None).unwrap();
    let m = (1..).find(|&m| (2u64.pow(m) - 1) % q as u64 == 0).unwrap();
    let f = FieldDescriptor::create_coefficient(2, m, None, q).unwrap();
    let lam = AdditiveCharacter::standard(&fq, &f).unwrap();
    Setup { s: SymplecticSpace::new(n, &fq).unwrap(), f, lam }
}

fn module(st: &Setup) -> SteinbergModule<'_> {
    SteinbergModule::build(&st.s, &st.f, CAP).unwrap()
}

/// Collects failures for one criterion.
#[derive(Default)]
struct Failures(Vec<String>);

impl Failures {
    fn verdict(&mut self, label: &str, v: Result<Verdict>) {
        self.verdict_allowing(label, v, false);
    }

    /// `vacuous_ok` admits a vacuous verdict where there is nothing to compare.
    fn verdict_allowing(&mut self, label: &str, v: Result<Verdict>, vacuous_ok: bool) {
        match v {
            Ok(v) if v.status == Status::Pass => {}
            Ok(v) if v.status == Status::Vacuous && vacuous_ok => {}
            Ok(v) => self.0.push(format!("{label}: {} {} {}", v.status.as_str(), v.detail, v.counterexample.unwrap_or_default())),
            Err(e) => self.0.push(format!("{label}: error {e}")),
        }
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }
}

fn tag(st: &Setup) -> String {
    format!("({},{})", st.s.rank(), st.s.q())
}

fn foundations() -> Failures {
    let mut out = Failures::default();
    for (n, q) in [(1, 3), (1, 5), (1, 7), (2, 3)] {
        let st = setup(n, q);
        let s = &st.s;
        out.verdict(&format!("foundations {}", tag(&st)), spgroup::check_foundations(s, CAP));
        // |U_w^-| against q to the number of inversions, computed independently
        let weyl = WeylGroup::new(s);
        for w in weyl.elements() {
            let minus = s.enumerate_uw_minus(&weyl.lift(w), CAP).unwrap();
            let len = w.length_by_inversions();
            out.require(minus.len() == (q as usize).pow(len as u32), || format!("{} |U_w^-| = {} for w = {w}, ℓ = {len}", tag(&st), minus.len()));
        }
        out.require(weyl.longest().length_by_inversions() == n * n, || format!("{} ℓ(w_0) ≠ n²", tag(&st)));
        out.require(s.enumerate_u(CAP).unwrap().len() == (q as usize).pow((n * n) as u32), || format!("{} |U| ≠ q^(n²)", tag(&st)));
    }
    out
}

fn characters_and_weil_irreducibility() -> Failures {
    let mut out = Failures::default();
    for (n, q) in [(1, 3), (2, 3)] {
        let st = setup(n, q);
        let (s, lam) = (&st.s, &st.lam);
        let t = tag(&st);
        out.verdict(&format!("lemma_homo {t}"), characters::check_lemma_homo(s, lam, CAP));
        out.verdict(&format!("lemma_fp {t}"), characters::check_lemma_fp(s, lam, CAP));
        match characters::check_lemma_puo(s, lam, CAP) {
            Ok((a, b)) => {
                out.verdict(&format!("lemma_puo {t}"), Ok(a));
                out.verdict(&format!("rooto {t}"), Ok(b));
            }
            Err(e) => out.0.push(format!("lemma_puo {t}: error {e}")),
        }
        let g0 = characters::default_g0_sample(s);
        out.verdict(&format!("lemma_g0 {t}"), characters::check_lemma_g0(s, lam, &g0, CAP));
        // at n = 1 there is a single class of each kind, so no pairs to separate
        let pairs_vacuous = n == 1;
        match weilmod::check_irru_isu(s, lam, CAP, 1) {
            Ok((a, b)) => {
                out.verdict(&format!("irru {t}"), Ok(a));
                out.verdict_allowing(&format!("isu {t}"), Ok(b), pairs_vacuous);
            }
            Err(e) => out.0.push(format!("irru {t}: error {e}")),
        }
        match weilmod::check_irb_isb(s, lam, CAP, 1) {
            Ok((a, b)) => {
                out.verdict(&format!("irb {t}"), Ok(a));
                out.verdict_allowing(&format!("isb {t}"), Ok(b), pairs_vacuous);
            }
            Err(e) => out.0.push(format!("irb {t}: error {e}")),
        }
        out.verdict(&format!("irrspm {t}"), weilmod::check_irrspm(s, lam, CAP));
    }
    for (n, q) in [(2, 3), (1, 7)] {
        let st = setup(n, q);
        let t = tag(&st);
        out.verdict(&format!("kk {t}"), weilmod::check_kk(&st.s, &st.lam, CAP, 1));
        out.verdict(&format!("kk_separation {t}"), characters::check_kk_separation(&st.s, &st.lam, CAP));
    }
    out
}

fn weil_module() -> Failures {
    let mut out = Failures::default();
    for (n, q) in [(1, 3), (1, 5), (2, 3)] {
        let st = setup(n, q);
        let (s, lam) = (&st.s, &st.lam);
        let t = tag(&st);
        let gens = s.generators_sp();
        out.verdict(&format!("j_homomorphism {t}"), Ok(weilmod::check_j_homomorphism(s, lam)));
        out.verdict(&format!("weil_intertwining {t}"), weilmod::check_weil_intertwining(s, lam, &gens));
        out.verdict(&format!("gauss_sum {t}"), weilmod::check_gauss_sum(lam));
        out.require(lam.gauss_sum().unwrap() == Fe::ONE, || format!("G(λ) ≠ 1 at {t}"));
        out.verdict(&format!("lum1 {t}"), weilmod::check_lum1(s, lam));
        out.verdict_allowing(&format!("lum2 {t}"), weilmod::check_lum2(s, lam), n == 1);
        out.verdict(&format!("weil_type_count {t}"), weilmod::check_weil_type_count(s, lam, &gens, CAP, 1));
        match weilmod::check_y_quotient(s, lam, &gens, 1) {
            Ok((v, _splits)) => out.verdict(&format!("y_quotient {t}"), Ok(v)),
            Err(e) => out.0.push(format!("y_quotient {t}: error {e}")),
        }
    }
    out
}

fn steinberg_identities() -> Failures {
    let mut out = Failures::default();
    let st = setup(2, 3);
    let m = module(&st);
    let lam = &st.lam;
    out.verdict("steinberg_16", identities::check_steinberg_relation(&m));
    out.verdict("mejor", identities::check_mejor(&m, lam));
    match identities::check_refo(&m, lam) {
        Ok((a, b)) => {
            out.verdict("refo", Ok(a));
            // the simplified form needs l ∤ q+1, which fails for l = 2, q = 3
            out.require(b.status != Status::Fail, || format!("refo_simple: {}", b.detail));
        }
        Err(e) => out.0.push(format!("refo: error {e}")),
    }
    let spm = st.s.enumerate_sp_m(CAP).unwrap();
    out.require(spm.len() == 1296, || format!("|Sp_M| = {} ≠ 1296", spm.len()));
    out.verdict("great", identities::check_great(&m, lam, CAP));
    let kappas = submodules::twists(&st.s);
    out.require(kappas.len() == 2, || format!("expected a square and a non-square twist, got {kappas:?}"));
    for k in &kappas {
        match submodules::check_impo1_and_cuatro(&m, &lam.twisted(*k).unwrap(), 1) {
            Ok((a, b)) => {
                out.verdict(&format!("impo1 κ={}", k.0), Ok(a));
                out.verdict(&format!("cuatro κ={}", k.0), Ok(b));
            }
            Err(e) => out.0.push(format!("impo1/cuatro κ={}: error {e}", k.0)),
        }
    }
    out
}

fn main_suite() -> Failures {
    let mut out = Failures::default();
    for (n, q) in [(1, 3), (1, 5), (1, 7), (2, 3)] {
        let st = setup(n, q);
        let m = module(&st);
        out.verdict(&format!("toon1 {}", tag(&st)), identities::check_toon1(&m, &st.lam));
    }

    let st = setup(2, 3);
    let m = module(&st);
    match identities::check_toon2(&m, &st.lam, 1) {
        Ok(r) => {
            out.verdict("toon2", Ok(r.identity));
            out.verdict("op", Ok(r.expansion));
            out.verdict("pius", Ok(r.table));
            out.require(!r.sampled, || "pius table was sampled".into());
            // every u E(b,c,d) D(a) with u ∈ U^+_{c_n c_{n−1}} hits a distinct element of U
            let cc = st.s.mul(&st.s.c_gen(2).unwrap(), &st.s.c_gen(1).unwrap());
            let plus = st.s.enumerate_u(CAP).unwrap().into_iter().filter(|x| st.s.in_uw_plus(&cc, x)).count();
            let expect = plus * 81;
            out.require(r.table_entries == expect && expect == m.dim(), || format!("pius table has {} entries, expected {expect} = dim I = {}", r.table_entries, m.dim()));
        }
        Err(e) => out.0.push(format!("toon2: error {e}")),
    }
    for (n, q) in [(2, 3), (2, 5)] {
        let st = setup(n, q);
        out.verdict(&format!("relation_catalogue {}", tag(&st)), identities::check_relation_catalogue(&st.s));
    }
    for (n, q) in [(1, 3), (2, 3)] {
        let st = setup(n, q);
        let m = module(&st);
        let kappas = submodules::twists(&st.s);
        out.require(kappas.len() == 2, || format!("{} needs two twists, got {kappas:?}", tag(&st)));
        match submodules::main_theorem_check(&m, &st.lam, &kappas, 1) {
            Ok(rep) => {
                out.require(rep.twists.len() == 2, || "main theorem did not cover both twists".into());
                for (item, v) in rep.items() {
                    out.verdict(&format!("main_theorem {} {item}", tag(&st)), Ok(v));
                }
                let half = ((q as usize).pow(n as u32) - 1) / 2;
                out.require(rep.rank == 2 * half + 1, || format!("{} joint rank {} ≠ {}", tag(&st), rep.rank, 2 * half + 1));
                out.verdict(&format!("main_theorem {}", tag(&st)), Ok(rep.verdict()));
            }
            Err(e) => out.0.push(format!("main_theorem {}: error {e}", tag(&st))),
        }
    }
    out
}

/// |Sp(2n, q)| = q^(n²) ∏ (q^(2i) − 1).
fn sp_order(n: u32, q: u128) -> u128 {
    q.pow(n * n) * (1..=n).map(|i| q.pow(2 * i) - 1).product::<u128>()
}

fn gow_location() -> Failures {
    let mut out = Failures::default();
    for (n, q) in [(1, 5), (2, 5), (1, 13)] {
        let st = setup(n, q);
        let t = tag(&st);
        let qq = q as u128;
        let index_b = sp_order(n as u32, qq) / (qq.pow((n * n) as u32) * (qq - 1).pow(n as u32));
        let index_p = index_b / (qq + 1);
        out.require(index_p.trailing_zeros() + 1 == index_b.trailing_zeros(), || format!("{t}: v2 relation fails for {index_b}, {index_p}"));
        let cap = (q == 5).then_some(CAP);
        match submodules::gow_location_check(&st.s, cap) {
            Ok((rec, v)) => {
                out.verdict(&format!("gow_location {t}"), Ok(v));
                out.require(rec.index_b == index_b && rec.index_p == index_p, || format!("{t}: {rec:?}"));
                if q == 5 {
                    out.require(rec.enumerated == Some(true), || format!("{t}: |P_J| enumeration {:?}", rec.enumerated));
                }
            }
            Err(e) => out.0.push(format!("gow_location {t}: error {e}")),
        }
    }
    let st = setup(2, 3);
    match spgroup::parabolic_order(&st.s, CAP) {
        Ok(po) => out.require(po.matches && po.order_p == 4 * po.order_b && po.order_b == 81 * 4, || format!("(2,3): {po:?}")),
        Err(e) => out.0.push(format!("parabolic_order (2,3): error {e}")),
    }
    out
}

fn config(args: &[&str]) -> RunConfig {
    let mut v = vec!["steinweil"];
    v.extend_from_slice(args);
    RunConfig::from_args(&Args::parse_from(v)).unwrap()
}

fn determinism() -> Failures {
    let mut out = Failures::default();
    for (n, q) in [(1, 3), (2, 3)] {
        let st = setup(n, q);
        let m = module(&st);
        out.verdict(&format!("lift_invariance {}", tag(&st)), steinberg::check_lift_invariance(&m, &[3, 4, 5], CAP));
    }

    let st = setup(2, 3);
    let m = module(&st);
    let dir = tempfile::tempdir().unwrap();
    let key = CacheKey::for_algebra(m.algebra(), "e");
    match cache::write(dir.path(), &key, m.algebra(), m.e()) {
        Ok(_) => {
            let back = cache::read(dir.path(), &key, m.algebra());
            out.require(matches!(&back, Ok(CacheRead::Hit(x)) if x == m.e()), || format!("cache read-back: {back:?}"));
        }
        Err(e) => out.0.push(format!("cache write: {e}")),
    }

    let cfg = config(&["--n", "2", "--q", "3", "--seed", "11"]);
    match (run(&cfg), run(&cfg)) {
        (Ok(a), Ok(b)) => {
            out.require(a.to_json() == b.to_json() && a.to_text() == b.to_text(), || "reports differ between runs".into());
            out.require(a.summary.fail == 0, || format!("report has failures:\n{}", a.to_text()));
        }
        (a, b) => out.0.push(format!("run failed: {:?} / {:?}", a.err(), b.err())),
    }
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Failures); 7] = [
        ("foundation exactness", 5, foundations),
        ("characters and Weil irreducibility", 60, characters_and_weil_irreducibility),
        ("Weil module", 120, weil_module),
        ("Steinberg identities at (2,3)", 600, steinberg_identities),
        ("main suite", 600, main_suite),
        ("Gow location", 60, gow_location),
        ("determinism and robustness", 600, determinism),
    ];
    let mut all = true;
    for (i, (title, budget, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut failures = f();
        let took = t.elapsed();
        let budget = Duration::from_secs(*budget);
        if took > budget {
            failures.0.push(format!("took {:.1} s, budget {} s", took.as_secs_f64(), budget.as_secs()));
        }
        let ok = failures.0.is_empty();
        all &= ok;
        println!("criterion {} {:<4} {:<36} {:>7.2} s (budget {} s)", i + 1, if ok { "pass" } else { "FAIL" }, title, took.as_secs_f64(), budget.as_secs());
        for msg in &failures.0 {
            println!("    {msg}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
