//! Run configuration, suite orchestration, caching and reports.

pub mod cache;
pub mod report;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{is_prime, parse_modulus, Field, FieldDescriptor};

pub use report::Report;
pub use run::run;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Core,
    Full,
    Stretch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Json,
}

/// How much of the suite runs at one parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Everything applicable.
    All,
    /// Group-algebra identities only (large e; no representation-level checks).
    Identities,
    /// Matrix-level checks only.
    Matrix,
}

#[derive(Parser, Debug, Clone)]
#[command(name = "steinweil", version, about = "Exact checks of the Steinberg and Weil modules of Sp(2n, q)")]
pub struct Args {
    /// Rank n (1..=3). With --q, runs this parameter set instead of the tier list.
    #[arg(long)]
    pub n: Option<usize>,
    /// Order of the base field F_q.
    #[arg(long)]
    pub q: Option<u32>,
    /// Modulus of F_q when q is not prime, constant term first ("1,0,1").
    #[arg(long = "q-modulus")]
    pub q_modulus: Option<String>,
    /// Characteristic of the coefficient field F.
    #[arg(long, default_value_t = 2)]
    pub l: u32,
    /// Degree of F over GF(l); smallest admissible degree when omitted.
    #[arg(long)]
    pub m: Option<u32>,
    /// Modulus of F, constant term first; the built-in default when omitted.
    #[arg(long = "l-modulus")]
    pub l_modulus: Option<String>,
    #[arg(long, value_enum, default_value_t = Tier::Core)]
    pub tier: Tier,
    /// Scope of the single parameter set given by --n/--q.
    #[arg(long, value_enum, default_value_t = Scope::All)]
    pub scope: Scope,
    /// "auto" (1 and the least non-square) or a comma list of nonzero F_q codes.
    #[arg(long, default_value = "auto")]
    pub twists: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "cache-dir", env = "STEINWEIL_CACHE")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Enumeration cap for any single group or subset.
    #[arg(long, default_value_t = 20_000_000)]
    pub cap: u128,
    /// Record wall time per check and log progress to stderr (reports are
    /// then no longer byte-stable).
    #[arg(long)]
    pub timings: bool,
}

/// One (n, q) entry of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamSet {
    pub n: usize,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_modulus: Option<Vec<u32>>,
    pub scope: Scope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Twists {
    Auto,
    List(Vec<u32>),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub sets: Vec<ParamSet>,
    pub l: u32,
    pub m: Option<u32>,
    pub l_modulus: Option<Vec<u32>>,
    pub tier: Tier,
    pub twists: Twists,
    pub seed: u64,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    pub cap: u128,
    #[serde(skip)]
    pub timings: bool,
}

pub fn tier_sets(tier: Tier) -> Vec<ParamSet> {
    let set = |n, q, scope| ParamSet { n, q, q_modulus: None, scope };
    let mut out = vec![set(1, 3, Scope::All)];
    if tier != Tier::Core {
        out.extend([set(1, 5, Scope::All), set(1, 7, Scope::All), set(2, 3, Scope::All)]);
    }
    if tier == Tier::Stretch {
        out.extend([set(2, 5, Scope::Identities), set(3, 3, Scope::Matrix)]);
    }
    out
}

/// (p, k) with q = p^k.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1 && is_prime(p as u64)).then_some((p, k))
}

impl RunConfig {
    pub fn from_args(a: &Args) -> Result<RunConfig> {
        let sets = match (a.n, a.q) {
            (Some(n), Some(q)) => {
                let q_modulus = a.q_modulus.as_deref().map(parse_modulus).transpose()?;
                vec![ParamSet { n, q, q_modulus, scope: a.scope }]
            }
            (None, None) => {
                if a.q_modulus.is_some() {
                    return Err(Error::Config("--q-modulus needs --q".into()));
                }
                tier_sets(a.tier)
            }
            _ => return Err(Error::Config("--n and --q must be given together".into())),
        };
        let twists = if a.twists.trim() == "auto" {
            Twists::Auto
        } else {
            let list = a
                .twists
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Config(format!("twist {t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            Twists::List(list)
        };
        let cfg = RunConfig {
            sets,
            l: a.l,
            m: a.m,
            l_modulus: a.l_modulus.as_deref().map(parse_modulus).transpose()?,
            tier: a.tier,
            twists,
            seed: a.seed,
            cache_dir: a.cache_dir.clone(),
            cap: a.cap,
            timings: a.timings,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Every set must yield valid fields before any check runs.
    pub fn validate(&self) -> Result<()> {
        for set in &self.sets {
            if !(1..=crate::spgroup::MAX_RANK).contains(&set.n) {
                return Err(Error::Config(format!("n = {} outside 1..={}", set.n, crate::spgroup::MAX_RANK)));
            }
            let fq = self.base_field(set)?;
            self.coefficient_field(&fq)?;
            if let Twists::List(ks) = &self.twists {
                if ks.is_empty() || ks.iter().any(|&k| k == 0 || k >= fq.order()) {
                    return Err(Error::Config(format!("twists {ks:?} are not nonzero elements of F_{}", fq.order())));
                }
            }
        }
        Ok(())
    }

    pub fn base_field(&self, set: &ParamSet) -> Result<Field> {
        let (p, k) = prime_power(set.q).ok_or_else(|| Error::Config(format!("q = {} is not a prime power", set.q)))?;
        FieldDescriptor::create(p, k, set.q_modulus.clone()).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn coefficient_field(&self, fq: &Field) -> Result<Field> {
        let p = fq.characteristic();
        if self.l == p {
            return Err(Error::Config(format!("l = {} equals the characteristic of F_q", self.l)));
        }
        if !is_prime(self.l as u64) {
            return Err(Error::Config(format!("l = {} is not prime", self.l)));
        }
        let m = match self.m {
            Some(m) => m,
            None => smallest_degree(self.l, p).ok_or_else(|| Error::Config(format!("no admissible m for l = {} and p = {p}", self.l)))?,
        };
        FieldDescriptor::create_coefficient(self.l, m, self.l_modulus.clone(), p).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Least m with p | l^m − 1 and l^m within the supported field size.
pub fn smallest_degree(l: u32, p: u32) -> Option<u32> {
    let mut x = l as u64 % p as u64;
    for m in 1..=16u32 {
        if x == 1 {
            return (l as u64).checked_pow(m).filter(|&o| o <= crate::ffield::MAX_FIELD_ORDER as u64).map(|_| m);
        }
        x = x * l as u64 % p as u64;
    }
    None
}
