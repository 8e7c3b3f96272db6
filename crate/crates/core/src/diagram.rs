//! Gauss diagrams: oriented circles with signed, directed chords.
//!
//! Positions on a circle are indices into its endpoint list, read
//! counterclockwise from the basepoint (index 0 of circle 0).  A chord's tail
//! sits on the over-pass (`O` in the code) and its head on the under-pass
//! (`U`); the sign is the handedness of the crossing and is written after
//! both passes.

use crate::{Error, Result};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

/// Stable chord label.  Parsing keeps the labels of the input code; moves
/// that create chords allocate fresh labels above the current maximum.
pub type ChordId = u32;

/// Handedness of a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Which end of a chord sits at a position: the tail is the over-pass (`O`),
/// the head the under-pass (`U`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Tail,
    Head,
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            End::Tail => 'O',
            End::Head => 'U',
        }
    }
}

/// One chord end lying on some circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub chord: ChordId,
    pub end: End,
}

/// A position on a circle: `index` counts endpoints counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub circle: usize,
    pub index: usize,
}

/// A gap between consecutive endpoints: gap `index` precedes the endpoint at
/// the same index.  A chordless circle has the single gap 0.
pub type Gap = Pos;

/// An element of the order-8 symmetry group generated by `rev` (reverse the
/// circle orientations), `mir` (mirror image: reverse all chords and flip all
/// signs) and `ou` (switch every crossing: reverse all chords).
///
/// The three generators commute, so an element is a triple of booleans; `mir`
/// is `reverse_chords && flip_signs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SymmetryElement {
    pub reverse_circles: bool,
    pub reverse_chords: bool,
    pub flip_signs: bool,
}

impl SymmetryElement {
    pub const REV: SymmetryElement = SymmetryElement {
        reverse_circles: true,
        reverse_chords: false,
        flip_signs: false,
    };
    pub const MIR: SymmetryElement = SymmetryElement {
        reverse_circles: false,
        reverse_chords: true,
        flip_signs: true,
    };
    pub const OU: SymmetryElement = SymmetryElement {
        reverse_circles: false,
        reverse_chords: true,
        flip_signs: false,
    };

    /// All eight group elements.
    pub fn group() -> [SymmetryElement; 8] {
        let mut out = [SymmetryElement::default(); 8];
        for bits in 0..8u8 {
            out[bits as usize] = SymmetryElement {
                reverse_circles: bits & 1 != 0,
                reverse_chords: bits & 2 != 0,
                flip_signs: bits & 4 != 0,
            };
        }
        out
    }
}

/// A multi-circle Gauss diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussDiagram {
    circles: Vec<Vec<Endpoint>>,
    signs: BTreeMap<ChordId, Sign>,
}

impl GaussDiagram {
    /// Builds a diagram from explicit circles and chord signs, validating
    /// that every chord occurs exactly once as a tail and once as a head.
    pub fn new(circles: Vec<Vec<Endpoint>>, signs: BTreeMap<ChordId, Sign>) -> Result<Self> {
        if circles.is_empty() {
            return Err(Error::IllegalMove(
                "a diagram needs at least one circle".into(),
            ));
        }
        let mut seen: BTreeMap<ChordId, (u32, u32)> = BTreeMap::new();
        for circle in &circles {
            for ep in circle {
                let entry = seen.entry(ep.chord).or_insert((0, 0));
                match ep.end {
                    End::Tail => entry.0 += 1,
                    End::Head => entry.1 += 1,
                }
            }
        }
        for (&id, &(tails, heads)) in &seen {
            if tails != 1 || heads != 1 {
                return Err(Error::Parse {
                    offset: 0,
                    msg: format!("chord {id} has {tails} over and {heads} under passes"),
                });
            }
            if !signs.contains_key(&id) {
                return Err(Error::ChordNotFound(id));
            }
        }
        if signs.len() != seen.len() {
            let orphan = signs.keys().find(|id| !seen.contains_key(id)).copied();
            return Err(Error::ChordNotFound(orphan.unwrap_or(0)));
        }
        Ok(GaussDiagram { circles, signs })
    }

    /// The unknot: one chordless circle.
    pub fn unknot() -> Self {
        GaussDiagram {
            circles: vec![Vec::new()],
            signs: BTreeMap::new(),
        }
    }

    /// Parses a single-circle Gauss code such as `O1+U2+O3+U1+O2+U3+`.
    /// The empty string denotes the unknot.  Each label must occur exactly
    /// once as `O` and once as `U`, with the same sign on both passes.
    pub fn parse_gauss_code(code: &str) -> Result<Self> {
        let bytes = code.trim().as_bytes();
        let mut circle = Vec::new();
        let mut signs: BTreeMap<ChordId, Sign> = BTreeMap::new();
        let mut i = 0;
        while i < bytes.len() {
            let start = i;
            let end = match bytes[i] {
                b'O' => End::Tail,
                b'U' => End::Head,
                c => {
                    return Err(Error::Parse {
                        offset: start,
                        msg: format!("expected 'O' or 'U', found {:?}", c as char),
                    })
                }
            };
            i += 1;
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == digits_start {
                return Err(Error::Parse {
                    offset: digits_start,
                    msg: "expected a chord label".into(),
                });
            }
            let label: ChordId = code[digits_start..i].parse().map_err(|_| Error::Parse {
                offset: digits_start,
                msg: "chord label out of range".into(),
            })?;
            let sign = match bytes.get(i) {
                Some(b'+') => Sign::Plus,
                Some(b'-') => Sign::Minus,
                other => {
                    return Err(Error::Parse {
                        offset: i,
                        msg: format!(
                            "expected '+' or '-' after label, found {:?}",
                            other.map(|c| *c as char)
                        ),
                    })
                }
            };
            i += 1;
            if let Some(prev) = signs.insert(label, sign) {
                if prev != sign {
                    return Err(Error::Parse {
                        offset: start,
                        msg: format!("chord {label} carries both signs"),
                    });
                }
            }
            circle.push(Endpoint { chord: label, end });
        }
        GaussDiagram::new(vec![circle], signs)
    }

    pub fn circles(&self) -> &[Vec<Endpoint>] {
        &self.circles
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn chord_count(&self) -> usize {
        self.signs.len()
    }

    pub fn chord_ids(&self) -> impl Iterator<Item = ChordId> + '_ {
        self.signs.keys().copied()
    }

    pub fn sign(&self, chord: ChordId) -> Result<Sign> {
        self.signs
            .get(&chord)
            .copied()
            .ok_or(Error::ChordNotFound(chord))
    }

    /// True when every chord carries the same sign (vacuously true without
    /// chords).
    pub fn is_one_signed(&self) -> bool {
        let mut it = self.signs.values();
        match it.next() {
            None => true,
            Some(first) => it.all(|s| s == first),
        }
    }

    /// Sum of the crossing signs.
    pub fn writhe(&self) -> i64 {
        self.signs.values().map(|s| s.value()).sum()
    }

    /// True for a single chordless circle.
    pub fn is_unknot(&self) -> bool {
        self.circles.len() == 1 && self.signs.is_empty()
    }

    /// The endpoint list of the unique circle; errors on links.
    pub fn single_circle(&self) -> Result<&[Endpoint]> {
        if self.circles.len() == 1 {
            Ok(&self.circles[0])
        } else {
            Err(Error::NotSingleCircle)
        }
    }

    /// Positions of a chord's tail and head.
    pub fn chord_ends(&self, chord: ChordId) -> Result<(Pos, Pos)> {
        let mut tail = None;
        let mut head = None;
        for (c, circle) in self.circles.iter().enumerate() {
            for (i, ep) in circle.iter().enumerate() {
                if ep.chord == chord {
                    let pos = Pos {
                        circle: c,
                        index: i,
                    };
                    match ep.end {
                        End::Tail => tail = Some(pos),
                        End::Head => head = Some(pos),
                    }
                }
            }
        }
        match (tail, head) {
            (Some(t), Some(h)) => Ok((t, h)),
            _ => Err(Error::ChordNotFound(chord)),
        }
    }

    pub fn endpoint_at(&self, pos: Pos) -> Result<Endpoint> {
        self.circles
            .get(pos.circle)
            .and_then(|c| c.get(pos.index))
            .copied()
            .ok_or(Error::InvalidPosition {
                circle: pos.circle,
                index: pos.index,
            })
    }

    /// A fresh chord label, one above the maximum in use.
    pub fn fresh_chord_id(&self) -> ChordId {
        self.signs.keys().next_back().map_or(1, |m| m + 1)
    }

    /// Rotates the basepoint of a circle forward by `k` endpoints.
    pub fn rotate_basepoint(&self, circle: usize, k: usize) -> Result<GaussDiagram> {
        let len = self
            .circles
            .get(circle)
            .ok_or(Error::InvalidPosition { circle, index: 0 })?
            .len();
        let mut out = self.clone();
        if len > 0 {
            out.circles[circle].rotate_left(k % len);
        }
        Ok(out)
    }

    /// Applies a symmetry group element.
    pub fn apply_symmetry(&self, g: SymmetryElement) -> GaussDiagram {
        let mut circles = self.circles.clone();
        if g.reverse_circles {
            for circle in &mut circles {
                // Reverse the cyclic order while keeping the basepoint first.
                if !circle.is_empty() {
                    circle[1..].reverse();
                }
            }
        }
        if g.reverse_chords {
            for circle in &mut circles {
                for ep in circle.iter_mut() {
                    ep.end = ep.end.other();
                }
            }
        }
        let signs = if g.flip_signs {
            self.signs
                .iter()
                .map(|(&id, &s)| (id, s.flipped()))
                .collect()
        } else {
            self.signs.clone()
        };
        GaussDiagram { circles, signs }
    }

    /// All eight symmetry images, starting with the identity.
    pub fn symmetry_orbit(&self) -> Vec<GaussDiagram> {
        SymmetryElement::group()
            .iter()
            .map(|&g| self.apply_symmetry(g))
            .collect()
    }

    /// Connected sum: splices the second diagram's circle into the first at
    /// the basepoints.  Both diagrams must be single circles; the second
    /// diagram's chords are relabelled above this diagram's labels.
    pub fn connected_sum(&self, other: &GaussDiagram) -> Result<GaussDiagram> {
        let a = self.single_circle()?;
        let b = other.single_circle()?;
        let base = self.fresh_chord_id();
        let mut relabel = BTreeMap::new();
        for (k, id) in other.signs.keys().enumerate() {
            relabel.insert(*id, base + k as ChordId);
        }
        let mut circle = a.to_vec();
        circle.extend(b.iter().map(|ep| Endpoint {
            chord: relabel[&ep.chord],
            end: ep.end,
        }));
        let mut signs = self.signs.clone();
        for (id, s) in &other.signs {
            signs.insert(relabel[id], *s);
        }
        GaussDiagram::new(vec![circle], signs)
    }

    /// The code of the single circle with chords relabelled in first-
    /// encounter order from the current basepoint.
    pub fn code_from_basepoint(&self) -> Result<String> {
        let circle = self.single_circle()?;
        Ok(render_rotation(circle, &self.signs, 0))
    }

    /// Lexicographically least code over all basepoint rotations, comparing
    /// `O` before `U`, then lower labels, then `+` before `-`.
    pub fn emit_canonical_code(&self) -> Result<String> {
        let circle = self.single_circle()?;
        if circle.is_empty() {
            return Ok(String::new());
        }
        let mut best: Option<Vec<(u8, u32, u8)>> = None;
        let mut best_rot = 0;
        for rot in 0..circle.len() {
            let key = rotation_key(circle, &self.signs, rot);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
                best_rot = rot;
            }
        }
        Ok(render_rotation(circle, &self.signs, best_rot))
    }

    /// A printable form of any diagram: circle codes joined by `/`, chords
    /// relabelled in first-encounter order scanning circle 0 onward.  Agrees
    /// with `code_from_basepoint` on single circles.
    pub fn display_code(&self) -> String {
        let mut relabel: BTreeMap<ChordId, u32> = BTreeMap::new();
        let mut next = 1;
        let mut parts = Vec::new();
        for circle in &self.circles {
            let mut s = String::new();
            for ep in circle {
                let label = *relabel.entry(ep.chord).or_insert_with(|| {
                    let l = next;
                    next += 1;
                    l
                });
                s.push(ep.end.as_char());
                s.push_str(&format!("{label}"));
                s.push(self.signs[&ep.chord].as_char());
            }
            if s.is_empty() {
                s.push('.');
            }
            parts.push(s);
        }
        parts.join("/")
    }

    /// Replaces the circles wholesale, keeping signs; validates the result.
    pub(crate) fn with_circles(&self, circles: Vec<Vec<Endpoint>>) -> Result<GaussDiagram> {
        let mut signs = BTreeMap::new();
        let present: BTreeSet<ChordId> = circles
            .iter()
            .flat_map(|c| c.iter().map(|ep| ep.chord))
            .collect();
        for id in present {
            signs.insert(id, self.sign(id)?);
        }
        GaussDiagram::new(circles, signs)
    }

    pub(crate) fn circles_mut(&mut self) -> &mut Vec<Vec<Endpoint>> {
        &mut self.circles
    }

    pub(crate) fn signs_mut(&mut self) -> &mut BTreeMap<ChordId, Sign> {
        &mut self.signs
    }

    pub fn signs(&self) -> &BTreeMap<ChordId, Sign> {
        &self.signs
    }
}

fn rotation_key(
    circle: &[Endpoint],
    signs: &BTreeMap<ChordId, Sign>,
    rot: usize,
) -> Vec<(u8, u32, u8)> {
    let n = circle.len();
    let mut relabel: BTreeMap<ChordId, u32> = BTreeMap::new();
    let mut next = 1;
    let mut key = Vec::with_capacity(n);
    for k in 0..n {
        let ep = circle[(rot + k) % n];
        let label = *relabel.entry(ep.chord).or_insert_with(|| {
            let l = next;
            next += 1;
            l
        });
        let end_rank = match ep.end {
            End::Tail => 0,
            End::Head => 1,
        };
        let sign_rank = match signs[&ep.chord] {
            Sign::Plus => 0,
            Sign::Minus => 1,
        };
        key.push((end_rank, label, sign_rank));
    }
    key
}

fn render_rotation(circle: &[Endpoint], signs: &BTreeMap<ChordId, Sign>, rot: usize) -> String {
    let n = circle.len();
    let mut relabel: BTreeMap<ChordId, u32> = BTreeMap::new();
    let mut next = 1;
    let mut out = String::with_capacity(n * 3);
    for k in 0..n {
        let ep = circle[(rot + k) % n];
        let label = *relabel.entry(ep.chord).or_insert_with(|| {
            let l = next;
            next += 1;
            l
        });
        out.push(ep.end.as_char());
        out.push_str(&format!("{label}"));
        out.push(signs[&ep.chord].as_char());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn parses_two_crossing_code() {
        let d = GaussDiagram::parse_gauss_code("O1+O2+U1+U2+").unwrap();
        assert_eq!(d.chord_count(), 2);
        assert_eq!(d.circle_count(), 1);
        assert_eq!(d.sign(1).unwrap(), Sign::Plus);
        assert_eq!(d.sign(2).unwrap(), Sign::Plus);
        let (t1, h1) = d.chord_ends(1).unwrap();
        assert_eq!((t1.index, h1.index), (0, 2));
    }

    #[test]
    fn rejects_malformed_codes() {
        assert!(matches!(
            GaussDiagram::parse_gauss_code("O1+U2+"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            GaussDiagram::parse_gauss_code("O1+U1-"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            GaussDiagram::parse_gauss_code("O1+O1+U1+"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            GaussDiagram::parse_gauss_code("X1+"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn canonical_code_is_rotation_invariant() {
        let d = GaussDiagram::parse_gauss_code("O1+U2+O3+U1+O2+U3+").unwrap();
        let canon = d.emit_canonical_code().unwrap();
        for k in 0..6 {
            let r = d.rotate_basepoint(0, k).unwrap();
            assert_eq!(r.emit_canonical_code().unwrap(), canon);
        }
        let reparsed = GaussDiagram::parse_gauss_code(&canon).unwrap();
        assert_eq!(reparsed.emit_canonical_code().unwrap(), canon);
    }

    #[test]
    fn symmetries_are_involutions() {
        let d = GaussDiagram::parse_gauss_code("O1+U2-O3+U1+O2-U3+").unwrap();
        for g in [
            SymmetryElement::REV,
            SymmetryElement::MIR,
            SymmetryElement::OU,
        ] {
            let twice = d.apply_symmetry(g).apply_symmetry(g);
            assert_eq!(twice, d);
        }
        assert_eq!(d.symmetry_orbit().len(), 8);
    }

    #[test]
    fn connected_sum_concatenates() {
        let a = GaussDiagram::parse_gauss_code("O1+O2+U1+U2+").unwrap();
        let b = GaussDiagram::parse_gauss_code("O1-O2-U1-U2-").unwrap();
        let s = a.connected_sum(&b).unwrap();
        assert_eq!(s.chord_count(), 4);
        assert_eq!(s.code_from_basepoint().unwrap(), "O1+O2+U1+U2+O3-O4-U3-U4-");
    }

    #[test]
    fn unknot_is_empty_code() {
        let d = GaussDiagram::parse_gauss_code("").unwrap();
        assert!(d.is_unknot());
        assert_eq!(d.emit_canonical_code().unwrap(), "");
    }

    #[test]
    fn canonical_code_relabels_chords() {
        // A shifted listing of the same diagram normalizes to the least code.
        let d = GaussDiagram::parse_gauss_code("O2+O1+U2+U1+").unwrap();
        assert_eq!(d.emit_canonical_code().unwrap(), "O1+O2+U1+U2+");
        // Emitting is idempotent: the canonical code parses to itself.
        let back = GaussDiagram::parse_gauss_code("O1+O2+U1+U2+").unwrap();
        assert_eq!(back.emit_canonical_code().unwrap(), "O1+O2+U1+U2+");
    }

    #[test]
    fn mirror_reverses_arrows_and_signs() {
        let d = GaussDiagram::parse_gauss_code("O1+O2+U1+U2+").unwrap();
        let m = d.apply_symmetry(SymmetryElement::MIR);
        assert_eq!(m.emit_canonical_code().unwrap(), "O1-O2-U1-U2-");
    }

    #[test]
    fn orbit_codes_of_two_crossing_knot() {
        // The eight symmetries collapse to two distinct canonical codes:
        // reversal and arrow flip each fix this diagram.
        let d = GaussDiagram::parse_gauss_code("O1+O2+U1+U2+").unwrap();
        let codes: BTreeSet<String> = d
            .symmetry_orbit()
            .into_iter()
            .map(|g| g.emit_canonical_code().unwrap())
            .collect();
        assert!(codes.len() <= 8);
        assert_eq!(codes.len(), 2);
        assert!(codes.contains("O1+O2+U1+U2+"));
        assert!(codes.contains("O1-O2-U1-U2-"));
    }
}
