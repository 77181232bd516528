//! Content-addressed store of approximant records.
//!
//! An entry's file name is the SHA-256 of its key (params, sign, kind, n,
//! starting precision). Entries are written once and never overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use qlambert::denomfactory::{ApproxRecord, FactorKind};
use qlambert::{QParams, Sign};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
struct Key<'a> {
    params: &'a QParams,
    sign: Sign,
    kind: FactorKind,
    n: usize,
    precision: Option<u64>,
}

pub struct RecordCache {
    dir: PathBuf,
}

impl RecordCache {
    pub fn new(dir: PathBuf) -> Self {
        RecordCache { dir }
    }

    fn path(&self, params: &QParams, sign: Sign, kind: FactorKind, n: usize, precision: Option<u64>) -> PathBuf {
        let key = serde_json::to_vec(&Key {
            params,
            sign,
            kind,
            n,
            precision,
        })
        .expect("key serializes");
        let digest = hex::encode(Sha256::digest(&key));
        self.dir.join(format!("{digest}.json"))
    }

    /// A stored record, if present and consistent with its key.
    pub fn get(
        &self,
        params: &QParams,
        sign: Sign,
        kind: FactorKind,
        n: usize,
        precision: Option<u64>,
    ) -> Option<ApproxRecord> {
        let bytes = fs::read(self.path(params, sign, kind, n, precision)).ok()?;
        let r: ApproxRecord = serde_json::from_slice(&bytes).ok()?;
        (r.n == n && r.sign == sign && r.kind == kind).then_some(r)
    }

    pub fn put(&self, params: &QParams, precision: Option<u64>, r: &ApproxRecord) -> std::io::Result<()> {
        let path = self.path(params, r.sign, r.kind, r.n, precision);
        if path.exists() {
            return Ok(());
        }
        fs::create_dir_all(&self.dir)?;
        let tmp = tmp_path(&path);
        fs::write(&tmp, serde_json::to_vec(r)?)?;
        fs::rename(&tmp, &path)
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    path.with_extension(format!("tmp{}", std::process::id()))
}
