//! Runs the check suites for each parameter set in dependency order.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cache::{self, CacheKey, CacheRead};
use super::{ParamSet, Report, RunConfig, Scope, Twists};
use crate::characters::{self, ChiV, UCharacter};
use crate::error::{Error, Result};
use crate::ffield::{AdditiveCharacter, Fe};
use crate::outcome::{CheckResult, Verdict};
use crate::spgroup::{self, SympElement, SymplecticSpace};
use crate::steinberg::{self, identities, submodules, SteinbergModule};
use crate::weilmod;

/// Which scopes a check belongs to.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Group-level arithmetic, run in every scope.
    Group,
    /// Matrix-level checks not involving e.
    Matrix,
    /// Group-algebra identities on e.
    Identity,
    /// Representations of Sp on I.
    Module,
}

impl Kind {
    fn runs_in(self, scope: Scope) -> bool {
        match scope {
            Scope::All => true,
            Scope::Identities => matches!(self, Kind::Group | Kind::Identity),
            Scope::Matrix => matches!(self, Kind::Group | Kind::Matrix),
        }
    }
}

struct Collector<'c> {
    cfg: &'c RunConfig,
    scope: Scope,
    params: String,
    results: Vec<CheckResult>,
}

fn from_error(e: Error) -> Verdict {
    match e {
        Error::CapExceeded { .. } => Verdict::skipped(e.to_string()),
        Error::Config(msg) => Verdict::skipped(format!("not applicable: {msg}")),
        other => Verdict::fail("check raised an error", other.to_string()),
    }
}

impl Collector<'_> {
    fn push(&mut self, name: &str, extra: &str, v: Verdict, ms: Option<u64>) {
        let params = if extra.is_empty() { self.params.clone() } else { format!("{} {extra}", self.params) };
        let mut r = CheckResult::new(name, &params, v);
        if self.cfg.timings {
            r.wall_ms = ms;
            eprintln!("{:<8} {:<24} {:<28} {} ms", r.status.as_str(), r.name, r.params, ms.unwrap_or(0));
        }
        self.results.push(r);
    }

    /// Runs `f` unless the scope excludes `kind`; one result per name.
    fn many(&mut self, kind: Kind, names: &[&str], extra: &str, f: impl FnOnce() -> Result<Vec<Verdict>>) {
        if !kind.runs_in(self.scope) {
            for n in names {
                self.push(n, extra, Verdict::skipped(format!("outside scope {:?}", self.scope)), None);
            }
            return;
        }
        let t = Instant::now();
        let out = f();
        let ms = Some(t.elapsed().as_millis() as u64);
        match out {
            Ok(vs) => {
                debug_assert_eq!(vs.len(), names.len());
                for (n, v) in names.iter().zip(vs) {
                    self.push(n, extra, v, ms);
                }
            }
            Err(e) => {
                let v = from_error(e);
                for n in names {
                    self.push(n, extra, v.clone(), ms);
                }
            }
        }
    }

    fn one(&mut self, kind: Kind, name: &str, f: impl FnOnce() -> Result<Verdict>) {
        self.many(kind, &[name], "", || f().map(|v| vec![v]));
    }

    fn unavailable(&mut self, names: &[&str], extra: &str, why: &str) {
        for n in names {
            self.push(n, extra, Verdict::skipped(why.to_string()), None);
        }
    }
}

/// Deterministic random words in `gens`, as a sample of the group they generate.
pub fn random_words(space: &SymplecticSpace, gens: &[(String, SympElement)], count: usize, len: usize, seed: u64) -> Vec<SympElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut g = space.identity();
            for _ in 0..len {
                g = space.mul(&g, &gens[rng.gen_range(0..gens.len())].1);
            }
            g
        })
        .collect()
}

const E_CHECKS: &[&str] = &["lift_invariance", "e_basics", "involution", "cache_round_trip", "steinberg_16", "mejor", "refo", "refo_simple", "great", "ele", "tri", "toon1", "toon2", "op", "pius"];
const MODULE_CHECKS: &[&str] = &["regular_u", "coordinates", "eigen", "torus_eigen", "trian", "ih"];
const TWIST_CHECKS: &[&str] = &["impo1", "cuatro"];
const MAIN_TWIST_ITEMS: &[&str] = &["socle", "stability", "relations", "weil", "control"];
const MAIN_ITEMS: &[&str] = &["distinct", "joint_rank"];

pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut results = Vec::new();
    for set in &cfg.sets {
        results.extend(run_set(cfg, set)?);
    }
    Ok(Report::new(cfg.clone(), results))
}

fn twist_list(cfg: &RunConfig, space: &SymplecticSpace) -> Vec<Fe> {
    match &cfg.twists {
        Twists::Auto => submodules::twists(space),
        Twists::List(ks) => ks.iter().map(|&k| Fe(k)).collect(),
    }
}

fn run_set(cfg: &RunConfig, set: &ParamSet) -> Result<Vec<CheckResult>> {
    let fq = cfg.base_field(set)?;
    let f = cfg.coefficient_field(&fq)?;
    let space = SymplecticSpace::new(set.n, &fq)?;
    let lambda = AdditiveCharacter::standard(&fq, &f)?;
    let kappas = twist_list(cfg, &space);
    let mut c = Collector {
        cfg,
        scope: set.scope,
        params: format!("n={} q={} l={} m={}", set.n, set.q, f.characteristic(), f.degree()),
        results: Vec::new(),
    };
    let (s, lam, cap, seed) = (&space, &lambda, cfg.cap, cfg.seed);
    let gens = s.generators_sp();

    // fields and group
    c.one(Kind::Group, "gauss_sum", || weilmod::check_gauss_sum(lam));
    c.one(Kind::Group, "foundations", || spgroup::check_foundations(s, cap));
    c.one(Kind::Group, "parabolic_order", || {
        let po = spgroup::parabolic_order(s, cap)?;
        Ok(if po.matches {
            Verdict::pass(format!("|B| = {}, |P_J| = {} = (q+1)|B|", po.order_b, po.order_p))
        } else {
            Verdict::fail("|P_J| ≠ (q+1)|B|", format!("{po:?}"))
        })
    });
    c.one(Kind::Group, "relation_catalogue", || identities::check_relation_catalogue(s));
    c.one(Kind::Group, "gow_location", || Ok(submodules::gow_location_check(s, Some(cap))?.1));

    // characters
    c.one(Kind::Matrix, "lemma_homo", || characters::check_lemma_homo(s, lam, cap));
    c.one(Kind::Matrix, "lemma_fp", || characters::check_lemma_fp(s, lam, cap));
    c.many(Kind::Matrix, &["lemma_puo", "rooto"], "", || {
        let (a, b) = characters::check_lemma_puo(s, lam, cap)?;
        Ok(vec![a, b])
    });
    c.one(Kind::Matrix, "lemma_g0", || characters::check_lemma_g0(s, lam, &characters::default_g0_sample(s), cap));
    c.one(Kind::Matrix, "theta_multiplicative", || characters::check_theta_multiplicative(s, &f, 200, seed, cap));
    c.one(Kind::Matrix, "theta_unipotent", || characters::check_theta_unipotent(s, &f, cap));
    c.one(Kind::Matrix, "kk_separation", || characters::check_kk_separation(s, lam, cap));

    // X and Y
    c.one(Kind::Matrix, "heisenberg", || Ok(weilmod::check_heisenberg_group(s, seed)));
    c.one(Kind::Matrix, "j_homomorphism", || Ok(weilmod::check_j_homomorphism(s, lam)));
    c.one(Kind::Matrix, "x_homomorphism", || {
        let spm = s.generators_sp_m();
        let sample = random_words(s, &spm, 64, 12, seed);
        weilmod::check_x_homomorphism(s, lam, &spm, &sample, 200, seed)
    });
    c.one(Kind::Matrix, "x_quotient", || weilmod::check_x_quotient(s, lam));
    c.many(Kind::Matrix, &["irru", "isu"], "", || {
        let (a, b) = weilmod::check_irru_isu(s, lam, cap, seed)?;
        Ok(vec![a, b])
    });
    c.many(Kind::Matrix, &["irb", "isb"], "", || {
        let (a, b) = weilmod::check_irb_isb(s, lam, cap, seed)?;
        Ok(vec![a, b])
    });
    c.one(Kind::Matrix, "irrspm", || weilmod::check_irrspm(s, lam, cap));
    c.one(Kind::Matrix, "kk", || weilmod::check_kk(s, lam, cap, seed));
    c.one(Kind::Matrix, "weil_intertwining", || weilmod::check_weil_intertwining(s, lam, &gens));
    c.one(Kind::Matrix, "weil_single_valued", || weilmod::check_weil_single_valued(s, lam, &gens, seed, 200_000));
    c.one(Kind::Matrix, "y_stability", || weilmod::check_y_stability(s, lam, &gens));
    c.one(Kind::Matrix, "lum1", || weilmod::check_lum1(s, lam));
    c.one(Kind::Matrix, "lum2", || weilmod::check_lum2(s, lam));
    c.one(Kind::Matrix, "weil_type_count", || weilmod::check_weil_type_count(s, lam, &gens, cap, seed));
    c.one(Kind::Matrix, "y_quotient", || Ok(weilmod::check_y_quotient(s, lam, &gens, seed)?.0));
    c.one(Kind::Matrix, "y_restriction_x", || weilmod::check_y_restriction_x(s, lam, &gens, seed));

    // e and everything built on it
    let wants_e = Kind::Identity.runs_in(set.scope) || Kind::Module.runs_in(set.scope);
    let mut module = None;
    c.one(if wants_e { Kind::Identity } else { Kind::Module }, "e_build", || {
        let m = SteinbergModule::build(s, &f, cap)?;
        let v = Verdict::pass(format!("e has {} terms, dim I = {}", m.e().len(), m.dim()));
        module = Some(m);
        Ok(v)
    });
    let twist_labels: Vec<String> = kappas.iter().map(|k| format!("κ={}", k.0)).collect();
    let Some(module) = module else {
        let why = "e unavailable";
        c.unavailable(E_CHECKS, "", why);
        c.unavailable(MODULE_CHECKS, "", why);
        for t in &twist_labels {
            c.unavailable(TWIST_CHECKS, t, why);
        }
        main_unavailable(&mut c, &twist_labels, why);
        return Ok(c.results);
    };
    let m = &module;

    c.one(Kind::Identity, "lift_invariance", || steinberg::check_lift_invariance(m, &[seed, seed.wrapping_add(1)], cap));
    c.one(Kind::Identity, "e_basics", || steinberg::check_e_basics(m, cap));
    c.one(Kind::Identity, "involution", || {
        if s.rank() == 1 {
            steinberg::check_involution(m, cap)
        } else {
            Ok(Verdict::skipped("run at n = 1 only (enumerates Sp)"))
        }
    });
    c.one(Kind::Identity, "cache_round_trip", || cache_round_trip(cfg, m));
    c.one(Kind::Identity, "steinberg_16", || identities::check_steinberg_relation(m));
    c.one(Kind::Identity, "mejor", || identities::check_mejor(m, lam));
    c.many(Kind::Identity, &["refo", "refo_simple"], "", || {
        let (a, b) = identities::check_refo(m, lam)?;
        Ok(vec![a, b])
    });
    c.one(Kind::Identity, "great", || identities::check_great(m, lam, cap));
    c.one(Kind::Identity, "ele", || identities::check_ele(m, lam));
    c.one(Kind::Identity, "tri", || identities::check_tri(m, lam));
    c.one(Kind::Identity, "toon1", || identities::check_toon1(m, lam));
    c.many(Kind::Identity, &["toon2", "op", "pius"], "", || {
        let r = identities::check_toon2(m, lam, seed)?;
        Ok(vec![r.identity, r.expansion, r.table])
    });

    c.one(Kind::Module, "regular_u", || steinberg::check_regular_u(m, true));
    c.one(Kind::Module, "coordinates", || steinberg::check_coordinates(m, 20, seed));
    let sigmas = sample_characters(s, lam);
    c.one(Kind::Module, "eigen", || steinberg::check_eigen(m, &sigmas));
    c.one(Kind::Module, "torus_eigen", || steinberg::check_torus_eigen(m, &sigmas, cap));
    c.many(Kind::Module, &["trian", "ih"], "", || {
        let (a, b) = submodules::check_torus_blocks(m, lam, cap)?;
        Ok(vec![a, b])
    });
    for (k, label) in kappas.iter().zip(&twist_labels) {
        c.many(Kind::Module, TWIST_CHECKS, label, || {
            let (a, b) = submodules::check_impo1_and_cuatro(m, &lam.twisted(*k)?, seed)?;
            Ok(vec![a, b])
        });
    }

    if !Kind::Module.runs_in(set.scope) {
        main_unavailable(&mut c, &twist_labels, &format!("outside scope {:?}", set.scope));
        return Ok(c.results);
    }
    let t = Instant::now();
    let main = submodules::main_theorem_check(m, lam, &kappas, seed);
    let ms = Some(t.elapsed().as_millis() as u64);
    match main {
        Ok(rep) => {
            for tw in &rep.twists {
                let label = format!("κ={}", tw.kappa.0);
                let vs = [&tw.socle, &tw.stability, &tw.relations, &tw.weil, &tw.control];
                for (item, v) in MAIN_TWIST_ITEMS.iter().zip(vs) {
                    c.push(&format!("main_theorem.{item}"), &label, v.clone(), ms);
                }
            }
            c.push("main_theorem.distinct", "", rep.distinct.clone(), ms);
            c.push("main_theorem.joint_rank", "", rep.joint_rank.clone(), ms);
            c.push("main_theorem", "", rep.verdict(), ms);
        }
        Err(e) => {
            let v = from_error(e);
            for label in &twist_labels {
                for item in MAIN_TWIST_ITEMS {
                    c.push(&format!("main_theorem.{item}"), label, v.clone(), ms);
                }
            }
            for item in MAIN_ITEMS {
                c.push(&format!("main_theorem.{item}"), "", v.clone(), ms);
            }
            c.push("main_theorem", "", v, ms);
        }
    }
    Ok(c.results)
}

fn main_unavailable(c: &mut Collector, twist_labels: &[String], why: &str) {
    for label in twist_labels {
        let names: Vec<String> = MAIN_TWIST_ITEMS.iter().map(|i| format!("main_theorem.{i}")).collect();
        c.unavailable(&names.iter().map(String::as_str).collect::<Vec<_>>(), label, why);
    }
    c.unavailable(&["main_theorem.distinct", "main_theorem.joint_rank", "main_theorem"], "", why);
}

/// Trivial, χ_{v_n} and the fundamental character with all coefficients 1.
fn sample_characters(space: &SymplecticSpace, lambda: &AdditiveCharacter) -> Vec<(String, UCharacter)> {
    let n = space.rank();
    let mut vn = vec![Fe::ZERO; n];
    vn[n - 1] = Fe::ONE;
    vec![
        ("trivial".into(), UCharacter::Trivial),
        ("chi_vn".into(), UCharacter::Chi(ChiV::on_n(space, &vn, lambda))),
        ("fundamental".into(), UCharacter::Fundamental { coeffs: vec![Fe::ONE; n], lambda: lambda.clone() }),
    ]
}

/// Writes e through the cache format and reads it back. With a cache directory
/// a valid cached copy must equal the freshly built e; stale or corrupt files
/// are replaced. The verdict text does not depend on which path was taken.
fn cache_round_trip(cfg: &RunConfig, m: &SteinbergModule) -> Result<Verdict> {
    let ga = m.algebra();
    let key = CacheKey::for_algebra(ga, "e");
    let back = match &cfg.cache_dir {
        None => cache::decode(&cache::encode(&key, ga, m.e())?, &key, ga),
        Some(dir) => {
            match cache::read(dir, &key, ga)? {
                CacheRead::Hit(x) => {
                    if &x != m.e() {
                        return Ok(Verdict::fail("cached e differs from the rebuilt e", cache::path(dir, &key).display().to_string()));
                    }
                }
                CacheRead::Missing => {}
                CacheRead::Stale(why) | CacheRead::Corrupt(why) => {
                    eprintln!("warning: ignoring cache file {}: {why}", cache::path(dir, &key).display());
                }
            }
            cache::write(dir, &key, ga, m.e())?;
            cache::read(dir, &key, ga)?
        }
    };
    Ok(match back {
        CacheRead::Hit(x) if &x == m.e() => Verdict::pass(format!("e round-trips bit-exactly ({} terms)", x.len())),
        CacheRead::Hit(_) => Verdict::fail("read-back e differs", key.file_name()),
        other => Verdict::fail("read-back failed", format!("{other:?}")),
    })
}
