//! On-disk cache for LPF segments.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "SPLF"  u8 version (0x01)  u64 lo  u64 hi  (hi - lo) x u64 P+(n)
//! ```

use std::env;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sieve::{check_segment, LpfSegment, LpfSieve, PrimeTable};

pub const MAGIC: &[u8; 4] = b"SPLF";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 4 + 1 + 8 + 8;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "SPL_CACHE_DIR";

pub fn write_segment<W: Write>(mut w: W, seg: &LpfSegment) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&seg.lo.to_le_bytes())?;
    w.write_all(&seg.hi.to_le_bytes())?;
    for v in &seg.lpf {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_segment<R: Read>(mut r: R) -> Result<LpfSegment> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|e| Error::CacheFormat(format!("truncated header: {e}")))?;
    if &header[..4] != MAGIC {
        return Err(Error::CacheFormat("bad magic".into()));
    }
    if header[4] != VERSION {
        return Err(Error::CacheFormat(format!(
            "unsupported version {}",
            header[4]
        )));
    }
    let lo = u64::from_le_bytes(header[5..13].try_into().unwrap());
    let hi = u64::from_le_bytes(header[13..21].try_into().unwrap());
    if hi <= lo || lo == 0 {
        return Err(Error::CacheFormat(format!("bad interval [{lo}, {hi})")));
    }
    let len = (hi - lo) as usize;
    let mut body = vec![0u8; len * 8];
    r.read_exact(&mut body)
        .map_err(|e| Error::CacheFormat(format!("truncated body: {e}")))?;
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::CacheFormat("trailing bytes after body".into()));
    }
    let lpf = body
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(LpfSegment { lo, hi, lpf })
}

/// Directory of `SPLF` files keyed by interval.
#[derive(Debug, Clone)]
pub struct SegmentCache {
    dir: PathBuf,
}

impl SegmentCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SegmentCache { dir: dir.into() }
    }

    /// Cache configured by `SPL_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        env::var_os(CACHE_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(SegmentCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, lo: u64, hi: u64) -> PathBuf {
        self.dir.join(format!("lpf_{lo}_{hi}.splf"))
    }

    pub fn load(&self, lo: u64, hi: u64) -> Result<Option<LpfSegment>> {
        let path = self.path_for(lo, hi);
        if !path.exists() {
            return Ok(None);
        }
        let seg = read_segment(BufReader::new(File::open(&path)?))?;
        if seg.lo != lo || seg.hi != hi {
            return Err(Error::CacheFormat(format!(
                "{} holds [{}, {})",
                path.display(),
                seg.lo,
                seg.hi
            )));
        }
        Ok(Some(seg))
    }

    pub fn store(&self, seg: &LpfSegment) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(seg.lo, seg.hi);
        // write-then-rename so concurrent readers never see a partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        write_segment(BufWriter::new(File::create(&tmp)?), seg)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Fills `out` with P⁺ over `[lo, hi)`, from disk when present.
    pub fn fill(
        &self,
        lo: u64,
        hi: u64,
        base: &PrimeTable,
        sieve: &mut LpfSieve,
        out: &mut Vec<u64>,
    ) -> Result<()> {
        check_segment(lo, hi, base)?;
        if let Some(seg) = self.load(lo, hi)? {
            *out = seg.lpf;
            return Ok(());
        }
        sieve.fill(lo, hi, base.primes(), out);
        let seg = LpfSegment {
            lo,
            hi,
            lpf: std::mem::take(out),
        };
        self.store(&seg)?;
        *out = seg.lpf;
        Ok(())
    }
}
