//! Braid words and long-knot traversals with bead slots.
//!
//! Braid letters are nonzero integers: letter g means the Artin generator
//! σ_{|g|} with the sign of g as the crossing sign. At a positive crossing
//! the strand entering on the left (position |g|) passes over; this
//! convention together with one κ bead per closure arc reproduces the
//! trefoil bead word β_k α_j β_i κ α_k β_j α_i, which is the calibration
//! frozen in `tests` below and in the golden conventions block.
//!
//! The long knot is the trace closure of the braid with strand 1 left
//! open: top of position s joins the bottom of position s for s ≥ 2. The
//! closure is a knot exactly when the braid's permutation is an n-cycle.

use crate::error::{Error, Result};
use serde::Serialize;

/// Identifier string for the frozen bead-placement conventions.
pub const PIVOT_CALIBRATION_ID: &str = "braid-closure/left-over/kappa-per-arc/v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidWord {
    pub strand_count: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strand_count: usize, letters: Vec<i32>) -> Result<Self> {
        if strand_count == 0 {
            return Err(Error::Parse { pos: 0, msg: "strand count must be positive".into() });
        }
        for &g in &letters {
            if g == 0 || g.unsigned_abs() as usize > strand_count - 1 {
                return Err(Error::GeneratorRange { gen: g as i64, strands: strand_count });
            }
        }
        Ok(BraidWord { strand_count, letters })
    }

    /// Smallest strand count admitting these letters.
    pub fn from_letters(letters: Vec<i32>) -> Result<Self> {
        let max_gen = letters.iter().map(|g| g.unsigned_abs()).max().unwrap_or(0) as usize;
        Self::new(max_gen + 1, letters)
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&g| g.signum() as i64).sum()
    }

    /// Where each bottom position ends up at the top.
    pub fn permutation(&self) -> Vec<usize> {
        let n = self.strand_count;
        let mut perm: Vec<usize> = (0..n).collect(); // perm[bottom] = current position
        for &g in &self.letters {
            let i = g.unsigned_abs() as usize - 1;
            for p in perm.iter_mut() {
                if *p == i {
                    *p += 1;
                } else if *p == i + 1 {
                    *p -= 1;
                }
            }
        }
        perm
    }

    pub fn is_single_cycle(&self) -> bool {
        let perm = self.permutation();
        let n = self.strand_count;
        let mut seen = 1usize;
        let mut at = perm[0];
        while at != 0 {
            seen += 1;
            if seen > n {
                return false;
            }
            at = perm[at];
        }
        seen == n
    }

    /// Mirror image: all crossing signs reversed.
    pub fn mirror(&self) -> Self {
        BraidWord {
            strand_count: self.strand_count,
            letters: self.letters.iter().map(|g| -g).collect(),
        }
    }
}

/// Parses `name ':' 'braid' '[' signed ints ']'` or a bare bracket list.
/// Returns the optional name and the braid on the smallest strand count.
pub fn parse_braid_line(text: &str) -> Result<(Option<String>, BraidWord)> {
    let (name, rest) = match text.find(':') {
        Some(c) => {
            let name = text[..c].trim();
            if name.is_empty() {
                return Err(Error::Parse { pos: 0, msg: "empty knot name".into() });
            }
            (Some(name.to_string()), &text[c + 1..])
        }
        None => (None, text),
    };
    let rest_trim = rest.trim_start();
    let offset = text.len() - rest_trim.len();
    let body = rest_trim.strip_prefix("braid").map(|b| b.trim_start()).unwrap_or(rest_trim);
    let offset = offset + (rest_trim.len() - body.len());
    let open = body.find('[').ok_or(Error::Parse { pos: offset, msg: "expected `[`".into() })?;
    let close = body.rfind(']').ok_or(Error::Parse {
        pos: offset + body.len(),
        msg: "expected `]`".into(),
    })?;
    if close < open {
        return Err(Error::Parse { pos: offset + close, msg: "`]` before `[`".into() });
    }
    let inner = &body[open + 1..close];
    let mut letters = Vec::new();
    for piece in inner.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            if inner.trim().is_empty() {
                break;
            }
            return Err(Error::Parse { pos: offset + open, msg: "empty braid letter".into() });
        }
        let g: i32 = piece.parse().map_err(|_| Error::Parse {
            pos: offset + open,
            msg: format!("bad braid letter `{}`", piece),
        })?;
        if g == 0 {
            return Err(Error::Parse { pos: offset + open, msg: "braid letter 0".into() });
        }
        letters.push(g);
    }
    Ok((name, BraidWord::from_letters(letters)?))
}

pub fn parse_braid(text: &str) -> Result<BraidWord> {
    Ok(parse_braid_line(text)?.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BeadKind {
    ROver,
    RUnder,
    RinvOver,
    RinvUnder,
    Pivot(i8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BeadSlot {
    pub kind: BeadKind,
    /// Crossing id (letter index in the braid word); None for pivots.
    pub crossing: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LongKnotDiagram {
    pub braid: BraidWord,
    pub traversal: Vec<BeadSlot>,
    pub writhe: i64,
    /// Signed rotation contribution per closure arc (one per closed strand).
    pub rotation_counts: Vec<i8>,
}

impl LongKnotDiagram {
    pub fn crossing_count(&self) -> usize {
        self.braid.letters.len()
    }

    pub fn total_rotation(&self) -> i64 {
        self.rotation_counts.iter().map(|&r| r as i64).sum()
    }
}

/// Builds the traversal: from the open strand's bottom endpoint through
/// every crossing twice, inserting one κ bead per closure arc.
pub fn braid_to_long_knot(braid: &BraidWord) -> Result<LongKnotDiagram> {
    if !braid.is_single_cycle() {
        let perm = braid.permutation();
        let mut components = 0usize;
        let mut seen = vec![false; braid.strand_count];
        for s in 0..braid.strand_count {
            if !seen[s] {
                components += 1;
                let mut at = s;
                while !seen[at] {
                    seen[at] = true;
                    at = perm[at];
                }
            }
        }
        return Err(Error::MultiComponent { components });
    }
    let mut traversal = Vec::new();
    let mut rotation_counts = Vec::new();
    let mut pos = 0usize; // 0-indexed strand position
    loop {
        for (ci, &g) in braid.letters.iter().enumerate() {
            let i = g.unsigned_abs() as usize - 1;
            if pos == i {
                let kind = if g > 0 { BeadKind::ROver } else { BeadKind::RinvUnder };
                traversal.push(BeadSlot { kind, crossing: Some(ci) });
                pos = i + 1;
            } else if pos == i + 1 {
                let kind = if g > 0 { BeadKind::RUnder } else { BeadKind::RinvOver };
                traversal.push(BeadSlot { kind, crossing: Some(ci) });
                pos = i;
            }
        }
        if pos == 0 {
            break;
        }
        traversal.push(BeadSlot { kind: BeadKind::Pivot(1), crossing: None });
        rotation_counts.push(1);
        // trace closure: top of this position joins its own bottom
    }
    Ok(LongKnotDiagram { braid: braid.clone(), traversal, writhe: braid.writhe(), rotation_counts })
}

/// The ordered bead slots, first-traversed first.
pub fn bead_word(d: &LongKnotDiagram) -> &[BeadSlot] {
    &d.traversal
}

/// The bundled knot table. Each knot carries two braid presentations
/// related by Markov moves (conjugation / stabilization), used by the
/// invariance suite. Alexander polynomials of every entry are pinned in
/// `alexander::tests`.
pub const KNOT_TABLE_TEXT: &str = "\
unknot: braid[]
unknot#2: braid[1]
3_1: braid[1,1,1]
3_1#2: braid[1,1,1,2]
4_1: braid[1,-2,1,-2]
4_1#2: braid[1,-2,1,-2,3]
5_1: braid[1,1,1,1,1]
5_1#2: braid[1,1,1,1,1,2]
5_2: braid[1,1,1,2,-1,2]
5_2#2: braid[1,1,1,2,-1,2,3]
6_1: braid[1,1,2,-1,-3,2,-3]
6_1#2: braid[1,1,2,-1,-3,2,-3,4]
";

#[derive(Clone, Debug)]
pub struct KnotTable {
    entries: Vec<(String, BraidWord)>,
}

impl KnotTable {
    pub fn bundled() -> Self {
        Self::parse(KNOT_TABLE_TEXT).expect("bundled table parses")
    }

    /// Bundled table, or the file named by `KINV_TABLE` when set.
    pub fn load_default() -> Result<Self> {
        match std::env::var("KINV_TABLE") {
            Ok(path) => Self::parse(&std::fs::read_to_string(path)?),
            Err(_) => Ok(Self::bundled()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, braid) = parse_braid_line(line)?;
            let name = name.ok_or(Error::Parse { pos: 0, msg: "table line missing name".into() })?;
            entries.push((name, braid));
        }
        Ok(KnotTable { entries })
    }

    pub fn get(&self, name: &str) -> Result<&BraidWord> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b)
            .ok_or_else(|| Error::UnknownKnot(name.to_string()))
    }

    /// The second stored presentation for a primary name, if any.
    pub fn alternate(&self, name: &str) -> Option<&BraidWord> {
        let alt = format!("{}#2", name);
        self.entries.iter().find(|(n, _)| *n == alt).map(|(_, b)| b)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn primary_names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str()).filter(|n| !n.contains('#'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_named_and_bare() {
        let (name, b) = parse_braid_line("3_1: braid[1,1,1]").unwrap();
        assert_eq!(name.as_deref(), Some("3_1"));
        assert_eq!(b.strand_count, 2);
        assert_eq!(b.letters, vec![1, 1, 1]);
        let (none, b2) = parse_braid_line("[1,-2,1,-2]").unwrap();
        assert!(none.is_none());
        assert_eq!(b2.strand_count, 3);
        // empty word on 1 strand
        let (_, b3) = parse_braid_line("unknot: braid[]").unwrap();
        assert_eq!(b3.strand_count, 1);
        assert!(b3.letters.is_empty());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_braid("braid[3").is_err());
        assert!(parse_braid("braid[0]").is_err());
        assert!(parse_braid("braid[1,x]").is_err());
        // out-of-range generator against an explicit strand count
        assert!(BraidWord::new(2, vec![3]).is_err());
    }

    #[test]
    fn trefoil_traversal_matches_bead_word() {
        // Z(trefoil) = Σ β_k α_j β_i κ α_k β_j α_i: traversal order is the
        // reverse of the algebra word, so the slots must read
        // over(0) under(1) over(2) κ under(0) over(1) under(2).
        let b = parse_braid("[1,1,1]").unwrap();
        let d = braid_to_long_knot(&b).unwrap();
        use BeadKind::*;
        let kinds: Vec<BeadKind> = d.traversal.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![ROver, RUnder, ROver, Pivot(1), RUnder, ROver, RUnder]);
        let crossings: Vec<Option<usize>> = d.traversal.iter().map(|s| s.crossing).collect();
        assert_eq!(
            crossings,
            vec![Some(0), Some(1), Some(2), None, Some(0), Some(1), Some(2)]
        );
        assert_eq!(d.writhe, 3);
        assert_eq!(d.traversal.len(), 7);
        assert_eq!(d.total_rotation(), 1);
    }

    #[test]
    fn unknot_and_multicomponent() {
        let d = braid_to_long_knot(&parse_braid("braid[]").unwrap()).unwrap();
        assert!(d.traversal.is_empty());
        assert_eq!(d.writhe, 0);
        // (1,−1) closes to two components and is rejected
        let b = BraidWord::new(2, vec![1, -1]).unwrap();
        match braid_to_long_knot(&b) {
            Err(Error::MultiComponent { components }) => assert_eq!(components, 2),
            other => panic!("expected MultiComponent, got {:?}", other),
        }
    }

    #[test]
    fn each_crossing_visited_once_over_once_under() {
        for text in ["[1,1,1]", "[1,-2,1,-2]", "[1,1,1,1,1]", "[1,1,1,2,-1,2]", "[1,1,2,-1,-3,2,-3]"] {
            let b = parse_braid(text).unwrap();
            let d = braid_to_long_knot(&b).unwrap();
            let n = d.crossing_count();
            let mut over = vec![0usize; n];
            let mut under = vec![0usize; n];
            for slot in &d.traversal {
                match (slot.kind, slot.crossing) {
                    (BeadKind::ROver | BeadKind::RinvOver, Some(c)) => over[c] += 1,
                    (BeadKind::RUnder | BeadKind::RinvUnder, Some(c)) => under[c] += 1,
                    (BeadKind::Pivot(_), None) => {}
                    other => panic!("bad slot {:?}", other),
                }
            }
            assert!(over.iter().all(|&c| c == 1), "{}: over counts {:?}", text, over);
            assert!(under.iter().all(|&c| c == 1), "{}: under counts {:?}", text, under);
            // pivot powers sum to the rotation, one per closed strand
            assert_eq!(d.rotation_counts.len(), b.strand_count - 1);
            let pivot_sum: i64 = d
                .traversal
                .iter()
                .filter_map(|s| match s.kind {
                    BeadKind::Pivot(p) => Some(p as i64),
                    _ => None,
                })
                .sum();
            assert_eq!(pivot_sum, d.total_rotation());
        }
    }

    #[test]
    fn writhe_matches_sign_sum() {
        let b = parse_braid("[1,-2,1,-2]").unwrap();
        assert_eq!(b.writhe(), 0);
        let d = braid_to_long_knot(&b).unwrap();
        assert_eq!(d.writhe, 0);
    }

    #[test]
    fn table_roundtrip_and_lookup() {
        let table = KnotTable::bundled();
        assert!(table.get("3_1").is_ok());
        assert!(table.get("nope").is_err());
        assert!(table.alternate("5_2").is_some());
        let primaries: Vec<&str> = table.primary_names().collect();
        assert_eq!(primaries, vec!["unknot", "3_1", "4_1", "5_1", "5_2", "6_1"]);
        // re-parsing a serialized table reproduces it
        let mut text = String::new();
        for name in table.names() {
            let b = table.get(name).unwrap();
            let letters: Vec<String> = b.letters.iter().map(|g| g.to_string()).collect();
            text.push_str(&format!("{}: braid[{}]\n", name, letters.join(",")));
        }
        let reparsed = KnotTable::parse(&text).unwrap();
        for name in table.names() {
            assert_eq!(reparsed.get(name).unwrap(), table.get(name).unwrap());
        }
    }

    #[test]
    fn all_table_entries_close_to_knots() {
        let table = KnotTable::bundled();
        for name in table.names() {
            let b = table.get(name).unwrap();
            assert!(
                braid_to_long_knot(b).is_ok(),
                "table entry {} does not close to a knot",
                name
            );
        }
    }
}
