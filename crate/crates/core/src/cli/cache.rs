//! Text cache for group-algebra vectors.
//!
//! ```text
//! steinweil-cache v1 n=<n> q=<q> l=<l> m=<m> modulus=<coeffs> object=<name>
//! <key> <digits>
//! ...
//! end terms=<count> crc32=<hex>
//! ```
//! The checksum covers every byte before the trailer line.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ffield::modulus_string;
use crate::steinberg::{GaVector, GroupAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub n: usize,
    pub q: u32,
    pub q_modulus: Vec<u32>,
    pub l: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    pub object: String,
}

impl CacheKey {
    pub fn for_algebra(ga: &GroupAlgebra, object: &str) -> CacheKey {
        let s = ga.space();
        let f = ga.field();
        CacheKey {
            n: s.rank(),
            q: s.q(),
            q_modulus: s.field().modulus().to_vec(),
            l: f.characteristic(),
            m: f.degree(),
            modulus: f.modulus().to_vec(),
            object: object.to_string(),
        }
    }

    pub fn header(&self) -> String {
        format!(
            "steinweil-cache v1 n={} q={} l={} m={} modulus={} object={}",
            self.n,
            self.q,
            self.l,
            self.m,
            modulus_string(&self.modulus),
            self.object
        )
    }

    /// The F_q modulus only enters the file name; the header layout is fixed.
    pub fn file_name(&self) -> String {
        let qm = modulus_string(&self.q_modulus).replace(',', "_");
        let lm = modulus_string(&self.modulus).replace(',', "_");
        format!("n{}-q{}-{}-l{}-m{}-{}-{}.txt", self.n, self.q, qm, self.l, self.m, lm, self.object)
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum CacheRead {
    Hit(GaVector),
    Missing,
    /// Header did not match the requested parameters.
    Stale(String),
    /// Truncated, checksum mismatch or unparsable body.
    Corrupt(String),
}

pub fn path(dir: &Path, key: &CacheKey) -> PathBuf {
    dir.join(key.file_name())
}

/// Full file contents for `x`.
pub fn encode(key: &CacheKey, ga: &GroupAlgebra, x: &GaVector) -> Result<String> {
    let mut body = key.header();
    body.push('\n');
    ga.write_terms(x, &mut body)?;
    let crc = crc32fast::hash(body.as_bytes());
    body.push_str(&format!("end terms={} crc32={crc:08x}\n", x.len()));
    Ok(body)
}

pub fn write(dir: &Path, key: &CacheKey, ga: &GroupAlgebra, x: &GaVector) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let body = encode(key, ga, x)?;
    let p = path(dir, key);
    let tmp = p.with_extension("tmp");
    fs::write(&tmp, body)?;
    fs::rename(&tmp, &p)?;
    Ok(p)
}

pub fn read(dir: &Path, key: &CacheKey, ga: &GroupAlgebra) -> Result<CacheRead> {
    let p = path(dir, key);
    let text = match fs::read_to_string(&p) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(CacheRead::Missing),
        Err(e) if e.kind() == std::io::ErrorKind::InvalidData => return Ok(CacheRead::Corrupt("not UTF-8".into())),
        Err(e) => return Err(Error::Io(e)),
    };
    Ok(decode(&text, key, ga))
}

pub fn decode(text: &str, key: &CacheKey, ga: &GroupAlgebra) -> CacheRead {
    let Some(header) = text.lines().next() else {
        return CacheRead::Corrupt("empty file".into());
    };
    if header != key.header() {
        return CacheRead::Stale(format!("header {header:?}"));
    }
    let body_end = match text.trim_end_matches('\n').rfind('\n') {
        Some(i) => i + 1,
        None => return CacheRead::Corrupt("no trailer".into()),
    };
    let (body, trailer) = text.split_at(body_end);
    let trailer = trailer.trim_end_matches('\n');
    let mut parts = trailer.split(' ');
    let (Some("end"), Some(terms), Some(crc), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return CacheRead::Corrupt(format!("bad trailer {trailer:?}"));
    };
    let terms = terms.strip_prefix("terms=").and_then(|t| t.parse::<usize>().ok());
    let crc = crc.strip_prefix("crc32=").and_then(|c| u32::from_str_radix(c, 16).ok());
    let (Some(terms), Some(crc)) = (terms, crc) else {
        return CacheRead::Corrupt(format!("bad trailer {trailer:?}"));
    };
    if crc32fast::hash(body.as_bytes()) != crc {
        return CacheRead::Corrupt("checksum mismatch".into());
    }
    match ga.parse_terms(body.lines().skip(1)) {
        Ok(x) if x.len() == terms => CacheRead::Hit(x),
        Ok(x) => CacheRead::Corrupt(format!("{} terms, trailer says {terms}", x.len())),
        Err(e) => CacheRead::Corrupt(e.to_string()),
    }
}
