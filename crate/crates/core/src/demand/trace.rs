use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DemandError;
use crate::graph::Node;

/// One communication request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Request {
    pub source: Node,
    pub destination: Node,
}

impl Request {
    pub fn new(source: Node, destination: Node) -> Self {
        Request { source, destination }
    }

    pub fn pair(self) -> (Node, Node) {
        (self.source, self.destination)
    }
}

/// Ordered request sequence over nodes `0..n`, free of self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    n: usize,
    requests: Vec<Request>,
    dropped_self_loops: usize,
}

impl Trace {
    /// Validate ids against `0..n` and drop `s == d` requests.
    pub fn new(n: usize, requests: impl IntoIterator<Item = Request>) -> Result<Self, DemandError> {
        let mut kept = Vec::new();
        let mut dropped = 0;
        for (i, r) in requests.into_iter().enumerate() {
            for node in [r.source, r.destination] {
                if node >= n {
                    return Err(DemandError::NodeOutOfRange { line: i + 1, node, n });
                }
            }
            if r.source == r.destination {
                dropped += 1;
            } else {
                kept.push(r);
            }
        }
        Ok(Trace { n, requests: kept, dropped_self_loops: dropped })
    }

    /// Parse the text format: one `SRC DST` or `SRC,DST` per line,
    /// `#` comments and blank lines ignored.
    pub fn read<R: BufRead>(reader: R, n: usize) -> Result<Self, DemandError> {
        let mut requests = Vec::new();
        let mut dropped = 0;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> =
                body.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
            if fields.len() != 2 {
                return Err(DemandError::Malformed {
                    line: lineno,
                    reason: format!("expected 2 fields, found {}", fields.len()),
                });
            }
            let mut ids = [0usize; 2];
            for (slot, f) in ids.iter_mut().zip(&fields) {
                *slot = f
                    .parse()
                    .map_err(|_| DemandError::Malformed { line: lineno, reason: format!("{f:?} is not a node id") })?;
                if *slot >= n {
                    return Err(DemandError::NodeOutOfRange { line: lineno, node: *slot, n });
                }
            }
            if ids[0] == ids[1] {
                dropped += 1;
            } else {
                requests.push(Request::new(ids[0], ids[1]));
            }
        }
        Ok(Trace { n, requests, dropped_self_loops: dropped })
    }

    pub fn load(path: &Path, n: usize) -> Result<Self, DemandError> {
        let file = File::open(path).map_err(|e| DemandError::io(path, e))?;
        Trace::read(BufReader::new(file), n)
    }

    /// [`Trace::load`] with `n` one more than the largest id kept.
    pub fn load_inferred(path: &Path) -> Result<Self, DemandError> {
        let mut t = Trace::load(path, usize::MAX)?;
        t.n = t.requests.iter().map(|r| r.source.max(r.destination) + 1).max().unwrap_or(0);
        Ok(t)
    }

    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in &self.requests {
            writeln!(w, "{} {}", r.source, r.destination)?;
        }
        w.flush()
    }

    pub fn save(&self, path: &Path) -> Result<(), DemandError> {
        let file = File::create(path).map_err(|e| DemandError::io(path, e))?;
        self.write(BufWriter::new(file)).map_err(|e| DemandError::io(path, e))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of requests, `m`.
    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    /// The last `min(w, t)` requests before position `t`.
    pub fn window_ending_at(&self, t: usize, w: usize) -> Range<usize> {
        t.saturating_sub(w)..t
    }

    /// Concatenate two traces over the same node set.
    pub fn concat(&self, other: &Trace) -> Trace {
        assert_eq!(self.n, other.n, "traces over different node sets");
        let mut requests = self.requests.clone();
        requests.extend_from_slice(&other.requests);
        Trace { n: self.n, requests, dropped_self_loops: self.dropped_self_loops + other.dropped_self_loops }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_self_loops() {
        let t = Trace::read("0 5\n5 0\n3 3\n".as_bytes(), 8).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.dropped_self_loops(), 1);
        assert_eq!(t.requests()[1], Request::new(5, 0));
    }

    #[test]
    fn empty_and_comments() {
        assert!(Trace::read("".as_bytes(), 4).unwrap().is_empty());
        let t = Trace::read("# header\n\n1,2\n 2 , 3 \n".as_bytes(), 4).unwrap();
        assert_eq!(t.requests(), &[Request::new(1, 2), Request::new(2, 3)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Trace::read("0 1\n0 x\n".as_bytes(), 4).unwrap_err();
        assert!(matches!(e, DemandError::Malformed { line: 2, .. }), "{e}");
        let e = Trace::read("0 1 2\n".as_bytes(), 4).unwrap_err();
        assert!(matches!(e, DemandError::Malformed { line: 1, .. }));
        let e = Trace::read("0 1\n\n0 9\n".as_bytes(), 4).unwrap_err();
        assert!(matches!(e, DemandError::NodeOutOfRange { line: 3, node: 9, n: 4 }));
        assert!(Trace::read("-1 2\n".as_bytes(), 4).is_err());
    }

    #[test]
    fn large_file_round_trip() {
        let reqs = (0..1_000_000usize).map(|i| Request::new(i % 1024, (i * 7 + 1) % 1024));
        let t = Trace::new(1024, reqs).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("big.txt");
        t.save(&path).unwrap();
        let back = Trace::load(&path, 1024).unwrap();
        assert_eq!(back.n(), 1024);
        assert_eq!(back.len() + back.dropped_self_loops(), 1_000_000);
        assert_eq!(back.requests(), t.requests());
        assert_eq!(Trace::load_inferred(&path).unwrap(), back);
    }

    #[test]
    fn windows_shrink_at_start() {
        let t = Trace::new(4, (0..10).map(|i| Request::new(i % 2, 2))).unwrap();
        assert_eq!(t.window_ending_at(3, 5), 0..3);
        assert_eq!(t.window_ending_at(8, 5), 3..8);
    }
}
