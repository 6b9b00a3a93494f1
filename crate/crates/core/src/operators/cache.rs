//! On-disk cache of eigendecompositions.
//!
//! Layout: two LF-terminated text lines
//!
//! ```text
//! CHRONOS-EIG v1
//! gamma=<decimal> K=<int> operator=<CTOA|CTO>
//! ```
//!
//! followed by `N` little-endian `f64` eigenvalues and `N²` eigenvector
//! components as little-endian `(re, im)` pairs, column-major.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::ccr::OperatorKind;
use super::eigen::EigenSystem;
use crate::error::{Error, Result};
use crate::model::SystemConfig;

pub const MAGIC: &str = "CHRONOS-EIG";
pub const VERSION: &str = "v1";
pub const ENV_VAR: &str = "CHRONOS_CACHE";

#[derive(Debug, Clone, PartialEq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// The file existed but was unusable; it has been overwritten.
    Recomputed(String),
    /// Non-atomic units are not part of the cache key.
    Bypassed,
}

#[derive(Debug, Clone)]
pub struct EigenCache {
    dir: PathBuf,
}

impl EigenCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$CHRONOS_CACHE` if set, else `fallback`.
    pub fn from_env_or(fallback: impl Into<PathBuf>) -> Self {
        match std::env::var_os(ENV_VAR) {
            Some(d) if !d.is_empty() => Self::new(d),
            _ => Self::new(fallback),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, kind: OperatorKind, gamma: f64, half_width: usize) -> PathBuf {
        self.dir
            .join(format!("{}_g{}_K{half_width}.eig", kind.tag(), gamma_key(gamma)))
    }

    pub fn load(&self, kind: OperatorKind, gamma: f64, half_width: usize) -> Result<EigenSystem> {
        let path = self.path_for(kind, gamma, half_width);
        read_file(&path, kind, gamma, half_width)
    }

    pub fn store(&self, kind: OperatorKind, gamma: f64, half_width: usize, sys: &EigenSystem) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(kind, gamma, half_width);
        let tmp = path.with_extension(format!("eig.tmp{}", std::process::id()));
        {
            let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
            write_to(&mut w, kind, gamma, half_width, sys)?;
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Loads the decomposition, or computes and stores it.
    pub fn get_or_compute<F>(
        &self,
        kind: OperatorKind,
        cfg: &SystemConfig,
        half_width: usize,
        compute: F,
    ) -> Result<(EigenSystem, CacheStatus)>
    where
        F: FnOnce() -> Result<EigenSystem>,
    {
        if !(cfg.l() == 1.0 && cfg.mu() == 1.0 && cfg.hbar() == 1.0) {
            return Ok((compute()?, CacheStatus::Bypassed));
        }
        let path = self.path_for(kind, cfg.gamma(), half_width);
        let status = if path.exists() {
            match self.load(kind, cfg.gamma(), half_width) {
                Ok(sys) => return Ok((sys, CacheStatus::Hit)),
                Err(e) => CacheStatus::Recomputed(e.to_string()),
            }
        } else {
            CacheStatus::Miss
        };
        let sys = compute()?;
        self.store(kind, cfg.gamma(), half_width, &sys)?;
        Ok((sys, status))
    }
}

/// γ rounded to 12 decimals.
pub fn gamma_key(gamma: f64) -> String {
    format!("{gamma:.12}")
}

pub fn header(kind: OperatorKind, gamma: f64, half_width: usize) -> String {
    format!(
        "{MAGIC} {VERSION}\ngamma={} K={half_width} operator={}\n",
        gamma_key(gamma),
        kind.tag()
    )
}

pub fn write_to<W: Write>(
    w: &mut W,
    kind: OperatorKind,
    gamma: f64,
    half_width: usize,
    sys: &EigenSystem,
) -> Result<()> {
    if sys.dim() != 2 * half_width + 1 {
        return Err(Error::Input(format!(
            "decomposition of dimension {} does not match K = {half_width}",
            sys.dim()
        )));
    }
    w.write_all(header(kind, gamma, half_width).as_bytes())?;
    for v in sys.eigenvalues() {
        w.write_all(&v.to_le_bytes())?;
    }
    for z in sys.eigenvectors() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_file(path: &Path, kind: OperatorKind, gamma: f64, half_width: usize) -> Result<EigenSystem> {
    let file = fs::File::open(path)?;
    read_from(BufReader::new(file), kind, gamma, half_width).map_err(|e| match e {
        Error::Cache { reason, .. } => Error::Cache {
            path: path.to_owned(),
            reason,
        },
        other => other,
    })
}

pub fn read_from<R: BufRead>(mut r: R, kind: OperatorKind, gamma: f64, half_width: usize) -> Result<EigenSystem> {
    let bad = |reason: String| Error::Cache {
        path: PathBuf::new(),
        reason,
    };
    let mut line = String::new();
    r.read_line(&mut line)?;
    let first = line.trim_end_matches('\n');
    match first.split_once(' ') {
        Some((MAGIC, VERSION)) => {}
        Some((MAGIC, v)) => return Err(bad(format!("version mismatch: found {v}, expected {VERSION}"))),
        _ => return Err(bad(format!("not a cache file (header {first:?})"))),
    }
    line.clear();
    r.read_line(&mut line)?;
    let expect = format!("gamma={} K={half_width} operator={}", gamma_key(gamma), kind.tag());
    if line.trim_end_matches('\n') != expect {
        return Err(bad(format!("key mismatch: {:?} vs {expect:?}", line.trim_end())));
    }
    let n = 2 * half_width + 1;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let want = 8 * n + 16 * n * n;
    if bytes.len() != want {
        return Err(bad(format!("payload has {} bytes, expected {want}", bytes.len())));
    }
    let mut words = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")));
    let eigenvalues: Vec<f64> = words.by_ref().take(n).collect();
    let mut vectors = Vec::with_capacity(n * n);
    while let (Some(re), Some(im)) = (words.next(), words.next()) {
        vectors.push(Complex64::new(re, im));
    }
    EigenSystem::from_parts(eigenvalues, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EnergyBasis;
    use crate::operators::cto::cto_matrix;
    use crate::operators::eigen::eig_hermitian;

    fn sample() -> (SystemConfig, EigenSystem) {
        let cfg = SystemConfig::atomic(0.3).unwrap();
        let basis = EnergyBasis::new(cfg, 3).unwrap();
        (cfg, eig_hermitian(&cto_matrix(&basis).unwrap()).unwrap())
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (cfg, sys) = sample();
        let mut buf = Vec::new();
        write_to(&mut buf, OperatorKind::CtoPtt, cfg.gamma(), 3, &sys).unwrap();
        assert!(buf.starts_with(b"CHRONOS-EIG v1\ngamma=0.300000000000 K=3 operator=CTO\n"));
        let back = read_from(&buf[..], OperatorKind::CtoPtt, cfg.gamma(), 3).unwrap();
        assert_eq!(back.eigenvalues(), sys.eigenvalues());
        assert_eq!(back.eigenvectors(), sys.eigenvectors());
        assert_eq!(back.residual_bound(), None);
    }

    #[test]
    fn rejects_mismatches() {
        let (cfg, sys) = sample();
        let mut buf = Vec::new();
        write_to(&mut buf, OperatorKind::CtoPtt, cfg.gamma(), 3, &sys).unwrap();
        assert!(read_from(&buf[..], OperatorKind::CtoaTat, cfg.gamma(), 3).is_err());
        assert!(read_from(&buf[..], OperatorKind::CtoPtt, 0.31, 3).is_err());
        let mut v2 = buf.clone();
        v2[13] = b'2';
        let err = read_from(&v2[..], OperatorKind::CtoPtt, cfg.gamma(), 3).unwrap_err();
        assert!(err.to_string().contains("version mismatch"), "{err}");
        buf.pop();
        assert!(read_from(&buf[..], OperatorKind::CtoPtt, cfg.gamma(), 3).is_err());
    }

    #[test]
    fn get_or_compute_cycle() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EigenCache::new(dir.path());
        let (cfg, sys) = sample();
        let (a, s1) = cache
            .get_or_compute(OperatorKind::CtoPtt, &cfg, 3, || Ok(sys.clone()))
            .unwrap();
        assert_eq!(s1, CacheStatus::Miss);
        let (b, s2) = cache
            .get_or_compute(OperatorKind::CtoPtt, &cfg, 3, || panic!("should hit"))
            .unwrap();
        assert_eq!(s2, CacheStatus::Hit);
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors(), b.eigenvectors());

        let path = cache.path_for(OperatorKind::CtoPtt, cfg.gamma(), 3);
        let mut bytes = fs::read(&path).unwrap();
        bytes[13] = b'0';
        fs::write(&path, bytes).unwrap();
        let (_, s3) = cache
            .get_or_compute(OperatorKind::CtoPtt, &cfg, 3, || Ok(sys.clone()))
            .unwrap();
        assert!(matches!(s3, CacheStatus::Recomputed(ref r) if r.contains("version")));
    }
}
