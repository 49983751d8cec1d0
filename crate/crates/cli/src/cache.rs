//! On-disk checkpoints of coefficient tables, in the binary series format.
//!
//! Entries live in the directory named by `SATO_TATE_CACHE` as
//! `<form>.p<prec>.qser` next to a `.sha256` sidecar. A table of precision at
//! least the requested one is reused (after its hash checks out) and truncated.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sato_tate_core::newforms::{build_form, NewformSpec};
use sato_tate_core::qexp::io::{read_binary, write_binary};
use sato_tate_core::qexp::FourierSeries;

use crate::manifest::{sha256_file, FileHash};

pub const CACHE_ENV: &str = "SATO_TATE_CACHE";

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn from_env() -> Self {
        Self { dir: std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from) }
    }

    /// The expansion of `spec` to `prec`, plus the cache entry it came from, if any.
    pub fn form(&self, spec: &NewformSpec, prec: usize) -> Result<(FourierSeries, Option<FileHash>)> {
        let Some(dir) = &self.dir else {
            return Ok((build_form(spec, prec)?, None));
        };
        if let Some((path, hash)) = self.lookup(dir, &spec.name(), prec)? {
            let f = read_binary(BufReader::new(fs::File::open(&path)?))
                .with_context(|| format!("reading cache entry {}", path.display()))?;
            return Ok((f.truncate(prec)?, Some(FileHash { path: path.display().to_string(), sha256: hash })));
        }
        let f = build_form(spec, prec)?;
        let hash = self.store(dir, &spec.name(), &f)?;
        Ok((f, Some(hash)))
    }

    /// Smallest cached precision `>= prec` whose content matches its sidecar hash.
    fn lookup(&self, dir: &Path, name: &str, prec: usize) -> Result<Option<(PathBuf, String)>> {
        let Ok(entries) = fs::read_dir(dir) else { return Ok(None) };
        let prefix = format!("{name}.p");
        let mut found: Vec<(usize, PathBuf)> = entries
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let file = e.file_name().into_string().ok()?;
                let p: usize = file.strip_prefix(&prefix)?.strip_suffix(".qser")?.parse().ok()?;
                (p >= prec).then(|| (p, e.path()))
            })
            .collect();
        found.sort();
        for (_, path) in found {
            let expected = fs::read_to_string(sidecar(&path)).unwrap_or_default();
            let actual = sha256_file(&path)?;
            if expected.trim() == actual {
                return Ok(Some((path, actual)));
            }
        }
        Ok(None)
    }

    fn store(&self, dir: &Path, name: &str, f: &FourierSeries) -> Result<FileHash> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let path = dir.join(format!("{name}.p{}.qser", f.prec()));
        let tmp = path.with_extension("qser.tmp");
        let mut bytes = Vec::new();
        write_binary(f, &mut bytes)?;
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, &path)?;
        let hash = sha256_file(&path)?;
        fs::write(sidecar(&path), format!("{hash}\n"))?;
        Ok(FileHash { path: path.display().to_string(), sha256: hash })
    }
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".sha256");
    PathBuf::from(s)
}
