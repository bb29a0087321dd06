//! Persistent flip-BFS state, one append-only log per polygon normal form.
//!
//! Each line is `TAG CRC32 CELL_KEY` where TAG is `D` (discovered) or `X`
//! (expanded) and the checksum covers `TAG CELL_KEY`. Lines that fail to
//! parse or checksum are moved to a `.quarantine` file next to the log.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::LatticePolygon;
use crate::subdivision::{flip_bfs, seed_mesh, EdgeSet, EnumerationBudget, Mesh, PointSet, Subdivision};

/// Decoded contents of a log.
#[derive(Clone, Debug, Default)]
pub struct LogState {
    pub discovered: Vec<EdgeSet>,
    pub expanded: HashSet<EdgeSet>,
    pub quarantined: usize,
}

/// An open, exclusively locked triangulation log.
pub struct TriangulationLog {
    ps: Arc<PointSet>,
    path: PathBuf,
    file: File,
    _lock: File,
}

fn file_stem(p: &LatticePolygon) -> String {
    let coords: Vec<String> = p.vertices().iter().map(|v| format!("{}_{}", v.x, v.y)).collect();
    format!("tri_{}", coords.join("_")).replace('-', "m")
}

fn record(tag: char, payload: &str) -> String {
    let body = format!("{tag} {payload}");
    format!("{tag} {:08x} {payload}\n", crc32fast::hash(body.as_bytes()))
}

fn parse_record(line: &str) -> Option<(char, &str)> {
    let mut parts = line.splitn(3, ' ');
    let tag = parts.next()?;
    let crc = u32::from_str_radix(parts.next()?, 16).ok()?;
    let payload = parts.next()?;
    let tag = match tag {
        "D" => 'D',
        "X" => 'X',
        _ => return None,
    };
    (crc32fast::hash(format!("{tag} {payload}").as_bytes()) == crc).then_some((tag, payload))
}

impl TriangulationLog {
    /// Opens (creating if needed) the log for `ps`, whose polygon must be in
    /// normal form.
    pub fn open(dir: &Path, ps: Arc<PointSet>) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.log", file_stem(ps.polygon())));
        let lock = OpenOptions::new().create(true).truncate(false).write(true).open(path.with_extension("lock"))?;
        lock.lock()?;
        let mut file = OpenOptions::new().create(true).read(true).append(true).open(&path)?;
        // a torn final record must not swallow the next append
        let len = file.metadata()?.len();
        if len > 0 {
            let mut last = [0u8; 1];
            file.seek(SeekFrom::Start(len - 1))?;
            file.read_exact(&mut last)?;
            if last[0] != b'\n' {
                file.write_all(b"\n")?;
            }
        }
        Ok(TriangulationLog { ps, path, file, _lock: lock })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn decode(&self, key: &str) -> Option<EdgeSet> {
        let s = Subdivision::from_cell_key(self.ps.polygon().clone(), key).ok()?;
        Some(Mesh::from_subdivision(self.ps.clone(), &s).ok()?.key())
    }

    /// Reads every record. Corrupt records are quarantined and the log is
    /// rewritten without them.
    pub fn load(&mut self) -> Result<LogState> {
        let reader = BufReader::new(File::open(&self.path)?);
        let mut state = LogState::default();
        let mut seen = HashSet::new();
        let mut good = Vec::new();
        let mut bad = Vec::new();
        for line in reader.split(b'\n') {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let text = String::from_utf8_lossy(&line).into_owned();
            let decoded = parse_record(&text).and_then(|(tag, payload)| Some((tag, self.decode(payload)?)));
            match decoded {
                Some((tag, key)) => {
                    if tag == 'D' {
                        if seen.insert(key) {
                            state.discovered.push(key);
                        }
                    } else {
                        state.expanded.insert(key);
                    }
                    good.push(text);
                }
                None => bad.push(text),
            }
        }
        for k in &state.expanded {
            if seen.insert(*k) {
                state.discovered.push(*k);
            }
        }
        if !bad.is_empty() {
            // a lost record may hide an unexpanded neighbour, so expand everything again
            state.expanded.clear();
            state.quarantined = bad.len();
            let mut q = OpenOptions::new().create(true).append(true).open(self.path.with_extension("quarantine"))?;
            for l in &bad {
                writeln!(q, "{l}")?;
            }
            let tmp = self.path.with_extension("tmp");
            let mut out = File::create(&tmp)?;
            for l in &good {
                writeln!(out, "{l}")?;
            }
            out.sync_all()?;
            fs::rename(&tmp, &self.path)?;
            self.file = OpenOptions::new().read(true).append(true).open(&self.path)?;
        }
        Ok(state)
    }

    fn append(&mut self, tag: char, keys: &[EdgeSet]) -> Result<()> {
        let mut buf = String::new();
        for k in keys {
            let s = Mesh::from_edges(self.ps.clone(), *k)?.to_subdivision(&[]);
            buf.push_str(&record(tag, &s.cell_key()));
        }
        self.file.write_all(buf.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }

    pub fn append_discovered(&mut self, keys: &[EdgeSet]) -> Result<()> {
        self.append('D', keys)
    }

    pub fn append_expanded(&mut self, keys: &[EdgeSet]) -> Result<()> {
        self.append('X', keys)
    }
}

/// Flip BFS over `polygon` backed by the log in `dir`; resumes any earlier
/// partial run. Triangulations are returned in the coordinates of `polygon`,
/// sorted canonically.
pub fn cached_triangulations(polygon: &LatticePolygon, budget: &EnumerationBudget, dir: &Path) -> Result<Vec<Subdivision>> {
    let (nf, to_nf) = polygon.normal_form_with_map();
    let ps = PointSet::new(&nf)?;
    let mut log = TriangulationLog::open(dir, ps.clone())?;
    let keys = flip_bfs(seed_mesh(&ps)?, budget, Some(&mut log))?;
    let back = to_nf.inverse();
    let mut out: Vec<Subdivision> = keys
        .into_iter()
        .map(|k| Ok(Mesh::from_edges(ps.clone(), k)?.to_subdivision(&[]).map(&back)))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.cells().cmp(b.cells()));
    if out.iter().any(|s| s.polygon() != polygon) {
        return Err(Error::Cache("normal-form map does not return to the input polygon".into()));
    }
    Ok(out)
}
