//! Checkpointed, resumable parallel computation of the differentials of one
//! degree.
//!
//! Workers compute cells independently (each only reads the finished lower
//! degree) and send results to a single writer, which appends them to the
//! journal. The stored result depends only on the structure and degree,
//! never on scheduling.

pub mod journal;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::thread;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{Chain, ComplexError, Resolution};
use crate::garside::GarsideStructure;
use journal::{chain_bytes, chain_from_bytes, fingerprint, Journal};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0} belongs to another structure or degree")]
    JournalMismatch(PathBuf),
    #[error("degree {0} needs the degree below it to be complete first")]
    LowerIncomplete(usize),
    #[error("stopped after writing {written} records")]
    Interrupted { written: usize },
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress {
    pub degree: usize,
    pub done: usize,
    pub total: usize,
}

pub struct RunOptions<'a> {
    pub workers: usize,
    /// Directory holding one journal per (structure, degree).
    pub journal_dir: Option<PathBuf>,
    /// Fault injection: stop as if killed after this many new records.
    pub stop_after: Option<usize>,
    pub progress: Option<&'a (dyn Fn(Progress) + Sync)>,
}

impl Default for RunOptions<'_> {
    fn default() -> Self {
        let workers = thread::available_parallelism().map_or(1, |n| n.get());
        RunOptions { workers, journal_dir: None, stop_after: None, progress: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub degree: usize,
    pub total: usize,
    /// Cells taken from the journal.
    pub resumed: usize,
    /// Cells computed in this run.
    pub computed: usize,
    /// Journal records dropped as corrupt.
    pub discarded: usize,
    /// Hex digest of the finished degree.
    pub digest: String,
}

pub fn journal_path(dir: &Path, g: &GarsideStructure, degree: usize) -> PathBuf {
    let name: String = g.name().chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
    dir.join(format!("{name}.d{degree}.journal"))
}

/// Canonical bytes of a complete degree: cell count, then each chain in
/// cell order.
pub fn serialize_degree(res: &Resolution<'_>, degree: usize) -> Result<Vec<u8>, ComplexError> {
    let chains = res.differentials(degree)?;
    let mut out = Vec::new();
    out.extend_from_slice(&(chains.len() as u64).to_le_bytes());
    for c in chains {
        chain_bytes(c, &mut out);
    }
    Ok(out)
}

pub fn store_digest(res: &Resolution<'_>, degree: usize) -> Result<String, ComplexError> {
    Ok(hex::encode(Sha256::digest(serialize_degree(res, degree)?)))
}

/// Fills in every missing differential of `degree`.
pub fn run_degree(res: &mut Resolution<'_>, degree: usize, opts: &RunOptions<'_>) -> Result<RunReport, EngineError> {
    if degree == 0 || degree > res.top_degree() {
        return Err(ComplexError::NoSuchDegree(degree).into());
    }
    if degree >= 2 && !res.store().is_complete(degree - 1) {
        return Err(EngineError::LowerIncomplete(degree));
    }
    let g = res.structure();
    let total = res.cells().count(degree);
    let faces = res.cells().count(degree - 1);
    let mut journal = None;
    let mut resumed = 0;
    let mut discarded = 0;
    let mut already_complete = false;
    if let Some(dir) = &opts.journal_dir {
        let fp = fingerprint(g, &res.cells().counts());
        let (j, replay) = Journal::open(&journal_path(dir, g, degree), &fp, degree)?;
        discarded = replay.corrupt;
        already_complete = replay.complete;
        for (cell, bytes) in replay.records {
            if res.differential(degree, cell).is_some() || cell as usize >= total {
                continue;
            }
            match chain_from_bytes(&bytes, g, faces) {
                Some(chain) => {
                    res.insert(degree, cell, chain)?;
                    resumed += 1;
                }
                None => discarded += 1,
            }
        }
        journal = Some(j);
    }

    let pending = res.store().missing(degree);
    let already = total - pending.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))?;
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::sync_channel::<(u32, Result<Chain, ComplexError>)>(1024);
    let shared: &Resolution<'_> = res;
    let (results, failure, journal) = thread::scope(|s| {
        let stop = &stop;
        let writer = s.spawn(move || {
            let mut results = Vec::new();
            let mut failure: Option<EngineError> = None;
            for (cell, r) in rx {
                if stop.load(Ordering::Relaxed) {
                    continue;
                }
                let chain = match r {
                    Ok(c) => c,
                    Err(e) => {
                        failure = Some(e.into());
                        stop.store(true, Ordering::Relaxed);
                        continue;
                    }
                };
                if let Some(j) = journal.as_mut() {
                    if let Err(e) = j.append_cell(cell, &chain) {
                        failure = Some(e);
                        stop.store(true, Ordering::Relaxed);
                        continue;
                    }
                }
                results.push((cell, chain));
                if let Some(p) = opts.progress {
                    p(Progress { degree, done: already + results.len(), total });
                }
                if opts.stop_after == Some(results.len()) {
                    failure = Some(EngineError::Interrupted { written: results.len() });
                    stop.store(true, Ordering::Relaxed);
                }
            }
            (results, failure, journal)
        });
        pool.install(|| {
            pending.par_iter().for_each_with(tx, |tx, &cell| {
                if !stop.load(Ordering::Relaxed) {
                    let _ = tx.send((cell, shared.compute(degree, cell)));
                }
            })
        });
        writer.join().expect("journal writer panicked")
    });
    let mut journal = journal;
    if let Some(j) = journal.as_mut() {
        j.sync()?;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let computed = results.len();
    for (cell, chain) in results {
        res.insert(degree, cell, chain)?;
    }
    if let Some(j) = journal.as_mut() {
        if !already_complete || computed > 0 {
            j.mark_complete()?;
        }
    }
    let digest = store_digest(res, degree)?;
    Ok(RunReport { degree, total, resumed, computed, discarded, digest })
}

/// Runs degrees `1..=max_degree` in order.
pub fn run_through(res: &mut Resolution<'_>, max_degree: usize, opts: &RunOptions<'_>) -> Result<Vec<RunReport>, EngineError> {
    (1..=max_degree.min(res.top_degree())).map(|d| run_degree(res, d, opts)).collect()
}

#[cfg(test)]
mod tests {
    use std::fs;
    use std::sync::Mutex;

    use super::*;
    use crate::garside::{build_from_presentation, Presentation};

    fn opts(workers: usize, dir: Option<&Path>) -> RunOptions<'static> {
        RunOptions { workers, journal_dir: dir.map(Path::to_path_buf), stop_after: None, progress: None }
    }

    #[test]
    fn worker_count_does_not_change_the_store() {
        let g = build_from_presentation(&Presentation::g12()).unwrap();
        let mut bytes = Vec::new();
        for workers in [1, 8] {
            let mut r = Resolution::new(&g);
            run_through(&mut r, 2, &opts(workers, None)).unwrap();
            bytes.push(serialize_degree(&r, 2).unwrap());
        }
        assert_eq!(bytes[0], bytes[1]);
        let mut plain = Resolution::new(&g);
        plain.compute_through(2).unwrap();
        assert_eq!(serialize_degree(&plain, 2).unwrap(), bytes[0]);
    }

    #[test]
    fn interrupted_run_resumes_to_the_same_store() {
        let g = build_from_presentation(&Presentation::type_a(4).unwrap()).unwrap();
        let mut reference = Resolution::new(&g);
        reference.compute_through(3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let mut r = Resolution::new(&g);
        run_through(&mut r, 2, &opts(4, Some(dir.path()))).unwrap();
        let total = r.cells().count(3);
        let mut killed = opts(4, Some(dir.path()));
        killed.stop_after = Some(total / 2);
        assert!(matches!(run_degree(&mut r, 3, &killed), Err(EngineError::Interrupted { .. })));

        let mut fresh = Resolution::new(&g);
        run_through(&mut fresh, 2, &opts(2, Some(dir.path()))).unwrap();
        let report = run_degree(&mut fresh, 3, &opts(3, Some(dir.path()))).unwrap();
        assert_eq!(report.resumed, total / 2);
        assert_eq!(report.computed, total - total / 2);
        assert_eq!(serialize_degree(&fresh, 3).unwrap(), serialize_degree(&reference, 3).unwrap());

        // replaying a complete journal computes nothing
        let mut again = Resolution::new(&g);
        run_through(&mut again, 2, &opts(1, Some(dir.path()))).unwrap();
        let report = run_degree(&mut again, 3, &opts(1, Some(dir.path()))).unwrap();
        assert_eq!((report.resumed, report.computed), (total, 0));
    }

    #[test]
    fn corrupt_and_torn_records_are_recomputed() {
        let g = build_from_presentation(&Presentation::type_a(3).unwrap()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let mut r = Resolution::new(&g);
        let reports = run_through(&mut r, 2, &opts(2, Some(dir.path()))).unwrap();
        let path = journal_path(dir.path(), &g, 2);
        let mut bytes = fs::read(&path).unwrap();
        // flip a byte inside the last cell record, then tear the tail
        let n = bytes.len();
        bytes[n - 32 - 4 - 40 - 3] ^= 0x55;
        bytes.extend_from_slice(&[7, 0, 0]);
        fs::write(&path, &bytes).unwrap();

        let mut fresh = Resolution::new(&g);
        run_through(&mut fresh, 1, &opts(1, Some(dir.path()))).unwrap();
        let report = run_degree(&mut fresh, 2, &opts(1, Some(dir.path()))).unwrap();
        assert_eq!(report.discarded, 1);
        assert_eq!(report.computed, 1);
        assert_eq!(report.digest, reports[1].digest);
    }

    #[test]
    fn refusals() {
        let g = build_from_presentation(&Presentation::g12()).unwrap();
        let mut r = Resolution::new(&g);
        assert!(matches!(run_degree(&mut r, 2, &opts(1, None)), Err(EngineError::LowerIncomplete(2))));
        let dir = tempfile::tempdir().unwrap();
        run_degree(&mut r, 1, &opts(1, Some(dir.path()))).unwrap();
        // a journal from another structure with the same name
        let other = build_from_presentation(&Presentation::g22()).unwrap();
        fs::copy(journal_path(dir.path(), &g, 1), journal_path(dir.path(), &other, 1)).unwrap();
        let mut r2 = Resolution::new(&other);
        assert!(matches!(run_degree(&mut r2, 1, &opts(1, Some(dir.path()))), Err(EngineError::JournalMismatch(_))));
    }

    #[test]
    fn progress_counts_up_to_the_total() {
        let g = build_from_presentation(&Presentation::type_a(3).unwrap()).unwrap();
        let seen = Mutex::new(Vec::new());
        let record = |p: Progress| seen.lock().unwrap().push(p);
        let mut r = Resolution::new(&g);
        let o = RunOptions { workers: 2, journal_dir: None, stop_after: None, progress: Some(&record) };
        run_through(&mut r, 2, &o).unwrap();
        let seen = seen.into_inner().unwrap();
        let last = seen.iter().filter(|p| p.degree == 2).map(|p| p.done).max().unwrap();
        assert_eq!(last, r.cells().count(2));
    }
}
