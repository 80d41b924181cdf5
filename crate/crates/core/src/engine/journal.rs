//! Append-only journal of computed differentials.
//!
//! Each record is `len: u32 LE`, `payload[len]`, `sha256(payload)`. The
//! first record is a header naming the structure fingerprint and degree;
//! then come cell records and finally a completion marker. A torn tail is
//! truncated away, and a record whose digest does not verify is dropped.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::EngineError;
use crate::complex::{Chain, Term};
use crate::garside::GarsideStructure;

const MAGIC: &[u8; 8] = b"DLJRNL01";
const KIND_HEADER: u8 = 0;
const KIND_CELL: u8 = 1;
const KIND_DONE: u8 = 2;
const DIGEST_LEN: usize = 32;

/// Canonical bytes of a chain: term count, then per term the cell, the
/// coefficient (signed little-endian) and the normal-form factors.
pub fn chain_bytes(chain: &Chain, out: &mut Vec<u8>) {
    out.extend_from_slice(&(chain.len() as u32).to_le_bytes());
    for t in chain.terms() {
        out.extend_from_slice(&t.cell.to_le_bytes());
        let c = t.coeff.to_signed_bytes_le();
        out.extend_from_slice(&(c.len() as u32).to_le_bytes());
        out.extend_from_slice(&c);
        let f = t.element.factors();
        out.extend_from_slice(&(f.len() as u32).to_le_bytes());
        for s in f {
            out.extend_from_slice(&s.to_le_bytes());
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Option<&[u8]> {
        let s = self.buf.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(s)
    }

    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }
}

/// Inverse of [`chain_bytes`]; `None` on malformed input or indices out of
/// range for `g` and `face_cells`.
pub fn chain_from_bytes(bytes: &[u8], g: &GarsideStructure, face_cells: usize) -> Option<Chain> {
    let mut r = Reader { buf: bytes, pos: 0 };
    let n = r.u32()? as usize;
    let mut terms = Vec::with_capacity(n.min(1 << 20));
    for _ in 0..n {
        let cell = r.u32()?;
        if cell as usize >= face_cells {
            return None;
        }
        let clen = r.u32()? as usize;
        let coeff = BigInt::from_signed_bytes_le(r.take(clen)?);
        let flen = r.u32()? as usize;
        let mut factors = Vec::with_capacity(flen.min(1 << 16));
        for _ in 0..flen {
            let s = r.u32()?;
            if s as usize >= g.num_simples() {
                return None;
            }
            factors.push(s);
        }
        terms.push(Term { cell, element: g.normal_form_of_simples(&factors), coeff });
    }
    (r.pos == bytes.len()).then(|| Chain::from_terms(terms))
}

/// Identifies a structure and its cell counts, so that a journal is never
/// replayed against another complex.
pub fn fingerprint(g: &GarsideStructure, counts: &[usize]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(g.name().as_bytes());
    h.update((g.num_atoms() as u64).to_le_bytes());
    h.update((g.num_simples() as u64).to_le_bytes());
    for a in 0..g.num_atoms() {
        h.update(g.atom(a).to_le_bytes());
    }
    for &l in &g.simples.lengths {
        h.update(l.to_le_bytes());
    }
    for &c in counts {
        h.update((c as u64).to_le_bytes());
    }
    h.finalize().into()
}

/// What was recovered from an existing journal.
#[derive(Debug, Default)]
pub struct Replay {
    /// Accepted raw chain payloads by cell (first record wins).
    pub records: BTreeMap<u32, Vec<u8>>,
    pub complete: bool,
    /// Records dropped because their digest failed.
    pub corrupt: usize,
    /// Records ignored because the cell already had one.
    pub duplicates: usize,
    /// Bytes cut from a torn tail.
    pub truncated: usize,
}

pub struct Journal {
    path: PathBuf,
    out: BufWriter<File>,
}

fn frame(payload: &[u8]) -> Vec<u8> {
    let mut v = Vec::with_capacity(payload.len() + 4 + DIGEST_LEN);
    v.extend_from_slice(&(payload.len() as u32).to_le_bytes());
    v.extend_from_slice(payload);
    v.extend_from_slice(&Sha256::digest(payload));
    v
}

fn header(fp: &[u8; 32], degree: usize) -> Vec<u8> {
    let mut p = vec![KIND_HEADER];
    p.extend_from_slice(MAGIC);
    p.extend_from_slice(fp);
    p.extend_from_slice(&(degree as u32).to_le_bytes());
    p
}

impl Journal {
    /// Opens or creates the journal and replays it. A file whose header
    /// names another structure or degree is an error; corrupt records are
    /// dropped and the file is rewritten without them.
    pub fn open(path: &Path, fp: &[u8; 32], degree: usize) -> Result<(Journal, Replay), EngineError> {
        let io = |source| EngineError::Io { path: path.to_path_buf(), source };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io)?;
        }
        let mut bytes = Vec::new();
        if path.exists() {
            File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(io)?;
        }
        let want = header(fp, degree);
        let mut replay = Replay::default();
        let mut pos = 0;
        let mut good: Vec<u8> = Vec::new();
        let mut saw_header = false;
        while pos < bytes.len() {
            let Some(len) = bytes.get(pos..pos + 4).map(|b| u32::from_le_bytes(b.try_into().unwrap()) as usize) else {
                break;
            };
            let end = pos + 4 + len + DIGEST_LEN;
            if end > bytes.len() {
                break;
            }
            let payload = &bytes[pos + 4..pos + 4 + len];
            let digest = &bytes[pos + 4 + len..end];
            let ok = Sha256::digest(payload).as_slice() == digest;
            pos = end;
            if !ok {
                replay.corrupt += 1;
                continue;
            }
            match payload.first() {
                Some(&KIND_HEADER) => {
                    if payload != want.as_slice() {
                        return Err(EngineError::JournalMismatch(path.to_path_buf()));
                    }
                    saw_header = true;
                }
                Some(&KIND_CELL) if saw_header && payload.len() >= 5 => {
                    let cell = u32::from_le_bytes(payload[1..5].try_into().unwrap());
                    if replay.records.contains_key(&cell) {
                        replay.duplicates += 1;
                        continue;
                    }
                    replay.records.insert(cell, payload[5..].to_vec());
                }
                Some(&KIND_DONE) if saw_header => replay.complete = true,
                _ => {
                    replay.corrupt += 1;
                    continue;
                }
            }
            good.extend_from_slice(&bytes[end - 4 - len - DIGEST_LEN..end]);
        }
        replay.truncated = bytes.len() - pos;
        let rewrite = replay.corrupt > 0 || replay.truncated > 0 || replay.duplicates > 0 || !saw_header;
        if rewrite {
            if !saw_header {
                good = frame(&want);
                replay.records.clear();
                replay.complete = false;
            }
            let tmp = path.with_extension("journal.tmp");
            fs::write(&tmp, &good).map_err(io)?;
            fs::rename(&tmp, path).map_err(io)?;
        }
        let file = OpenOptions::new().append(true).open(path).map_err(io)?;
        Ok((Journal { path: path.to_path_buf(), out: BufWriter::new(file) }, replay))
    }

    pub fn append_cell(&mut self, cell: u32, chain: &Chain) -> Result<(), EngineError> {
        let mut p = vec![KIND_CELL];
        p.extend_from_slice(&cell.to_le_bytes());
        chain_bytes(chain, &mut p);
        self.write(&frame(&p))
    }

    pub fn mark_complete(&mut self) -> Result<(), EngineError> {
        self.write(&frame(&[KIND_DONE]))?;
        self.sync()
    }

    fn write(&mut self, bytes: &[u8]) -> Result<(), EngineError> {
        self.out.write_all(bytes).map_err(|source| EngineError::Io { path: self.path.clone(), source })
    }

    pub fn sync(&mut self) -> Result<(), EngineError> {
        let io = |source| EngineError::Io { path: self.path.clone(), source };
        self.out.flush().map_err(io)?;
        self.out.get_ref().sync_data().map_err(io)
    }
}
