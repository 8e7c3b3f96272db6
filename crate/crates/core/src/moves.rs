//! Reidemeister moves on Gauss diagrams.
//!
//! `r1`/`r2` are detected combinatorially.  For `r3` the legal local
//! patterns are generated from planar geometry: all 128 ways of orienting
//! three pairwise-crossing strands around a triangle (two mirror layouts,
//! strand directions, over/under at each corner) are enumerated and each is
//! turned into the local Gauss pattern it induces.  A combinatorial triangle
//! in a diagram admits `r3` exactly when it matches one of those patterns.

use crate::diagram::{ChordId, End, Endpoint, Gap, GaussDiagram, Pos, Sign};
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

/// A single Reidemeister move instance.
///
/// Gaps index the space before the endpoint with the same index; chord ids
/// are the stable labels of the diagram the move is applied to.  `R2Plus`
/// inserts the pair antiparallel (tails `a,b` at one gap, heads `b,a` at the
/// other) unless `parallel` is set.  `R3.variant` selects among the legal
/// triangle placements for the chord triple, in deterministic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveSpec {
    R1Minus {
        chord: ChordId,
    },
    R1Plus {
        gap: Gap,
        sign: Sign,
        tail_first: bool,
    },
    R2Minus {
        x: ChordId,
        y: ChordId,
    },
    R2Plus {
        a: Gap,
        b: Gap,
        sign: Sign,
        parallel: bool,
    },
    R3 {
        chords: [ChordId; 3],
        variant: usize,
    },
}

fn succ(len: usize, i: usize) -> usize {
    (i + 1) % len
}

/// Chords removable by `r1-`: both endpoints adjacent on one circle.
pub fn r1_removable(d: &GaussDiagram) -> Vec<ChordId> {
    let mut out = Vec::new();
    for chord in d.chord_ids() {
        let (t, h) = d.chord_ends(chord).unwrap();
        if t.circle != h.circle {
            continue;
        }
        let len = d.circles()[t.circle].len();
        if succ(len, t.index) == h.index || succ(len, h.index) == t.index {
            out.push(chord);
        }
    }
    out
}

fn adjacent_on_circle(d: &GaussDiagram, p: Pos, q: Pos) -> bool {
    if p.circle != q.circle {
        return false;
    }
    let len = d.circles()[p.circle].len();
    succ(len, p.index) == q.index || succ(len, q.index) == p.index
}

/// Chord pairs removable by `r2-`: opposite signs, tails adjacent, heads
/// adjacent (parallel or antiparallel pattern, possibly across circles).
pub fn r2_removable(d: &GaussDiagram) -> Vec<(ChordId, ChordId)> {
    let ids: Vec<ChordId> = d.chord_ids().collect();
    let mut out = Vec::new();
    for (i, &x) in ids.iter().enumerate() {
        for &y in &ids[i + 1..] {
            if d.sign(x).unwrap() == d.sign(y).unwrap() {
                continue;
            }
            let (tx, hx) = d.chord_ends(x).unwrap();
            let (ty, hy) = d.chord_ends(y).unwrap();
            if adjacent_on_circle(d, tx, ty) && adjacent_on_circle(d, hx, hy) {
                out.push((x, y));
            }
        }
    }
    out
}

fn remove_positions(d: &GaussDiagram, remove: &BTreeSet<Pos>) -> Result<GaussDiagram> {
    let mut circles = Vec::with_capacity(d.circle_count());
    for (c, circle) in d.circles().iter().enumerate() {
        circles.push(
            circle
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    !remove.contains(&Pos {
                        circle: c,
                        index: *i,
                    })
                })
                .map(|(_, ep)| *ep)
                .collect::<Vec<_>>(),
        );
    }
    d.with_circles(circles)
}

fn apply_r1_minus(d: &GaussDiagram, chord: ChordId) -> Result<GaussDiagram> {
    let (t, h) = d.chord_ends(chord)?;
    if !adjacent_on_circle(d, t, h) {
        return Err(Error::IllegalMove(format!("chord {chord} is not a kink")));
    }
    remove_positions(d, &BTreeSet::from([t, h]))
}

fn apply_r2_minus(d: &GaussDiagram, x: ChordId, y: ChordId) -> Result<GaussDiagram> {
    if !r2_removable(d)
        .iter()
        .any(|&(a, b)| (a, b) == (x, y) || (a, b) == (y, x))
    {
        return Err(Error::IllegalMove(format!(
            "chords {x},{y} form no r2 pair"
        )));
    }
    let (tx, hx) = d.chord_ends(x)?;
    let (ty, hy) = d.chord_ends(y)?;
    remove_positions(d, &BTreeSet::from([tx, hx, ty, hy]))
}

fn check_gap(d: &GaussDiagram, gap: Gap) -> Result<()> {
    let len = d
        .circles()
        .get(gap.circle)
        .ok_or(Error::InvalidPosition {
            circle: gap.circle,
            index: gap.index,
        })?
        .len();
    if gap.index > len.saturating_sub(1) && !(len == 0 && gap.index == 0) {
        return Err(Error::InvalidPosition {
            circle: gap.circle,
            index: gap.index,
        });
    }
    Ok(())
}

fn apply_r1_plus(d: &GaussDiagram, gap: Gap, sign: Sign, tail_first: bool) -> Result<GaussDiagram> {
    check_gap(d, gap)?;
    let id = d.fresh_chord_id();
    let mut out = d.clone();
    let (first, second) = if tail_first {
        (End::Tail, End::Head)
    } else {
        (End::Head, End::Tail)
    };
    let circle = &mut out.circles_mut()[gap.circle];
    circle.insert(
        gap.index,
        Endpoint {
            chord: id,
            end: second,
        },
    );
    circle.insert(
        gap.index,
        Endpoint {
            chord: id,
            end: first,
        },
    );
    out.signs_mut().insert(id, sign);
    Ok(out)
}

fn apply_r2_plus(
    d: &GaussDiagram,
    a: Gap,
    b: Gap,
    sign: Sign,
    parallel: bool,
) -> Result<GaussDiagram> {
    check_gap(d, a)?;
    check_gap(d, b)?;
    let id_a = d.fresh_chord_id();
    let id_b = id_a + 1;
    let mut out = d.clone();
    out.signs_mut().insert(id_a, sign);
    out.signs_mut().insert(id_b, sign.flipped());
    let tails = [
        Endpoint {
            chord: id_a,
            end: End::Tail,
        },
        Endpoint {
            chord: id_b,
            end: End::Tail,
        },
    ];
    let heads = if parallel {
        [
            Endpoint {
                chord: id_a,
                end: End::Head,
            },
            Endpoint {
                chord: id_b,
                end: End::Head,
            },
        ]
    } else {
        [
            Endpoint {
                chord: id_b,
                end: End::Head,
            },
            Endpoint {
                chord: id_a,
                end: End::Head,
            },
        ]
    };
    if a.circle == b.circle && a.index == b.index {
        let circle = &mut out.circles_mut()[a.circle];
        for ep in heads.iter().rev().chain(tails.iter().rev()) {
            circle.insert(a.index, *ep);
        }
    } else if a.circle == b.circle {
        // Insert at the higher index first so the lower one stays valid.
        let (hi, lo, hi_block, lo_block) = if a.index > b.index {
            (a.index, b.index, tails, heads)
        } else {
            (b.index, a.index, heads, tails)
        };
        let circle = &mut out.circles_mut()[a.circle];
        for ep in hi_block.iter().rev() {
            circle.insert(hi, *ep);
        }
        for ep in lo_block.iter().rev() {
            circle.insert(lo, *ep);
        }
    } else {
        for ep in tails.iter().rev() {
            out.circles_mut()[a.circle].insert(a.index, *ep);
        }
        for ep in heads.iter().rev() {
            out.circles_mut()[b.circle].insert(b.index, *ep);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// r3

/// One legal local pattern: per strand the two crossings it visits in order
/// (0 = AB, 1 = AC, 2 = BC) with the endpoint type carried there, plus the
/// three crossing signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct R3Config {
    strands: [[(u8, End); 2]; 3],
    signs: [Sign; 3],
}

/// The table of legal `r3` patterns, built once from geometry.
pub struct R3Table {
    configs: Vec<R3Config>,
}

/// The three adjacent endpoint pairs of a triangle, each `(p, succ(p))`.
pub type R3Placement = [(Pos, Pos); 3];

impl Default for R3Table {
    fn default() -> Self {
        Self::new()
    }
}

impl R3Table {
    pub fn new() -> Self {
        // Corner coordinates of the triangle: AB, AC, BC — counterclockwise
        // in the first layout, clockwise (mirror) in the second.
        let layouts: [[[i64; 2]; 3]; 2] =
            [[[0, 2], [-2, -1], [2, -1]], [[0, 2], [2, -1], [-2, -1]]];
        // Strand s visits these crossings: A: AB,AC  B: AB,BC  C: AC,BC.
        const STRAND_CROSSINGS: [[u8; 2]; 3] = [[0, 1], [0, 2], [1, 2]];
        // Crossing k joins these strands.
        const CROSSING_STRANDS: [[u8; 2]; 3] = [[0, 1], [0, 2], [1, 2]];
        let corner_of = |layout: &[[i64; 2]; 3], crossing: u8| layout[crossing as usize];
        let mut configs = Vec::new();
        for layout in &layouts {
            for dir_bits in 0..8u8 {
                for over_bits in 0..8u8 {
                    let dir = |s: u8| dir_bits & (1 << s) != 0;
                    // Direction vector of strand s.
                    let vec_of = |s: u8| {
                        let [c0, c1] = STRAND_CROSSINGS[s as usize];
                        let (from, to) = if dir(s) {
                            (corner_of(layout, c0), corner_of(layout, c1))
                        } else {
                            (corner_of(layout, c1), corner_of(layout, c0))
                        };
                        [to[0] - from[0], to[1] - from[1]]
                    };
                    let over_at = |k: u8| {
                        let [s1, s2] = CROSSING_STRANDS[k as usize];
                        if over_bits & (1 << k) != 0 {
                            (s1, s2)
                        } else {
                            (s2, s1)
                        }
                    };
                    // A triangle slides only when the over/under relation
                    // admits a total height order on the three strands (one
                    // strand above both others, one below both). Cyclic
                    // patterns — each strand over exactly once — are frozen.
                    let mut over_count = [0u8; 3];
                    for k in 0..3u8 {
                        over_count[over_at(k).0 as usize] += 1;
                    }
                    if over_count.iter().all(|&c| c == 1) {
                        continue;
                    }
                    let mut signs = [Sign::Plus; 3];
                    for k in 0..3u8 {
                        let (over, under) = over_at(k);
                        let vo = vec_of(over);
                        let vu = vec_of(under);
                        let det = vo[0] * vu[1] - vo[1] * vu[0];
                        debug_assert!(det != 0);
                        signs[k as usize] = if det > 0 { Sign::Plus } else { Sign::Minus };
                    }
                    let mut strands = [[(0u8, End::Tail); 2]; 3];
                    for s in 0..3u8 {
                        let [c0, c1] = STRAND_CROSSINGS[s as usize];
                        let order = if dir(s) { [c0, c1] } else { [c1, c0] };
                        for (slot, &k) in order.iter().enumerate() {
                            let (over, _) = over_at(k);
                            let end = if over == s { End::Tail } else { End::Head };
                            strands[s as usize][slot] = (k, end);
                        }
                    }
                    configs.push(R3Config { strands, signs });
                }
            }
        }
        configs.sort();
        configs.dedup();
        R3Table { configs }
    }

    /// All triangle placements for the chord triple that match a legal
    /// pattern, sorted deterministically.
    pub fn placements(&self, d: &GaussDiagram, chords: [ChordId; 3]) -> Result<Vec<R3Placement>> {
        if chords[0] == chords[1] || chords[0] == chords[2] || chords[1] == chords[2] {
            return Err(Error::IllegalMove("r3 needs three distinct chords".into()));
        }
        let mut endpoints = Vec::with_capacity(6);
        for &c in &chords {
            let (t, h) = d.chord_ends(c)?;
            endpoints.push(t);
            endpoints.push(h);
        }
        let among = |p: Pos| endpoints.contains(&p);
        // Ordered adjacent pairs (p, succ(p)) inside the six endpoints,
        // joining two different chords.
        let mut pairs: Vec<(Pos, Pos)> = Vec::new();
        for &p in &endpoints {
            let len = d.circles()[p.circle].len();
            let q = Pos {
                circle: p.circle,
                index: succ(len, p.index),
            };
            if p != q && among(q) {
                let (ep, eq) = (d.endpoint_at(p)?, d.endpoint_at(q)?);
                if ep.chord != eq.chord {
                    pairs.push((p, q));
                }
            }
        }
        let mut found: BTreeSet<R3Placement> = BTreeSet::new();
        let k = pairs.len();
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    let cover = [pairs[i], pairs[j], pairs[l]];
                    let mut used = BTreeSet::new();
                    for (p, q) in cover {
                        used.insert(p);
                        used.insert(q);
                    }
                    if used.len() != 6 {
                        continue;
                    }
                    if self.cover_matches(d, &cover)? {
                        let mut placement = cover;
                        placement.sort();
                        found.insert(placement);
                    }
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    fn cover_matches(&self, d: &GaussDiagram, cover: &[(Pos, Pos); 3]) -> Result<bool> {
        // The chord shared by two pairs plays the role of their crossing.
        let chord_pair = |(p, q): (Pos, Pos)| -> Result<(Endpoint, Endpoint)> {
            Ok((d.endpoint_at(p)?, d.endpoint_at(q)?))
        };
        let eps = [
            chord_pair(cover[0])?,
            chord_pair(cover[1])?,
            chord_pair(cover[2])?,
        ];
        let common = |a: usize, b: usize| -> Option<ChordId> {
            for e in [eps[a].0, eps[a].1] {
                if eps[b].0.chord == e.chord || eps[b].1.chord == e.chord {
                    return Some(e.chord);
                }
            }
            None
        };
        // Try all assignments of the three pairs to strand slots A,B,C.
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for perm in PERMS {
            // crossing 0 = AB joins strands 0,1; 1 = AC joins 0,2; 2 = BC joins 1,2.
            let c_ab = common(perm[0], perm[1]);
            let c_ac = common(perm[0], perm[2]);
            let c_bc = common(perm[1], perm[2]);
            let (Some(c_ab), Some(c_ac), Some(c_bc)) = (c_ab, c_ac, c_bc) else {
                continue;
            };
            if c_ab == c_ac || c_ab == c_bc || c_ac == c_bc {
                continue;
            }
            let chord_of = [c_ab, c_ac, c_bc];
            let signs = [d.sign(c_ab)?, d.sign(c_ac)?, d.sign(c_bc)?];
            'config: for config in &self.configs {
                if config.signs != signs {
                    continue;
                }
                for s in 0..3 {
                    let (first, second) = (eps[perm[s]].0, eps[perm[s]].1);
                    for (slot, ep) in [(0, first), (1, second)] {
                        let (crossing, end) = config.strands[s][slot];
                        if ep.chord != chord_of[crossing as usize] || ep.end != end {
                            continue 'config;
                        }
                    }
                }
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Swaps the two endpoints of each adjacent pair of a placement.
pub fn apply_r3_placement(d: &GaussDiagram, placement: &R3Placement) -> Result<GaussDiagram> {
    let mut out = d.clone();
    for &(p, q) in placement {
        if !adjacent_on_circle(d, p, q) {
            return Err(Error::IllegalMove("r3 pair is not adjacent".into()));
        }
        let (ep, eq) = (d.endpoint_at(p)?, d.endpoint_at(q)?);
        out.circles_mut()[p.circle][p.index] = eq;
        out.circles_mut()[q.circle][q.index] = ep;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Application and enumeration

/// Applies a move using a caller-provided `r3` table (hot paths reuse one).
pub fn apply_with(d: &GaussDiagram, m: &MoveSpec, table: &R3Table) -> Result<GaussDiagram> {
    match *m {
        MoveSpec::R1Minus { chord } => apply_r1_minus(d, chord),
        MoveSpec::R1Plus {
            gap,
            sign,
            tail_first,
        } => apply_r1_plus(d, gap, sign, tail_first),
        MoveSpec::R2Minus { x, y } => apply_r2_minus(d, x, y),
        MoveSpec::R2Plus {
            a,
            b,
            sign,
            parallel,
        } => apply_r2_plus(d, a, b, sign, parallel),
        MoveSpec::R3 { chords, variant } => {
            let placements = table.placements(d, chords)?;
            let placement = placements.get(variant).ok_or_else(|| {
                Error::IllegalMove(format!(
                    "r3 on chords {},{},{} has {} placements, variant {variant} requested",
                    chords[0],
                    chords[1],
                    chords[2],
                    placements.len()
                ))
            })?;
            apply_r3_placement(d, placement)
        }
    }
}

/// Applies a single Reidemeister move.
pub fn apply(d: &GaussDiagram, m: &MoveSpec) -> Result<GaussDiagram> {
    match m {
        MoveSpec::R3 { .. } => apply_with(d, m, &R3Table::new()),
        _ => apply_with(
            d,
            m,
            &R3Table {
                configs: Vec::new(),
            },
        ),
    }
}

/// Greedy `r1-`/`r2-` reduction to a fixpoint, deterministically: the lowest
/// removable kink first, else the lowest removable pair.
pub fn simplify(d: &GaussDiagram) -> GaussDiagram {
    simplify_trace(d).0
}

/// Like [`simplify`], also returning the moves performed.
pub fn simplify_trace(d: &GaussDiagram) -> (GaussDiagram, Vec<MoveSpec>) {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    loop {
        if let Some(&chord) = r1_removable(&cur).first() {
            let m = MoveSpec::R1Minus { chord };
            cur = apply(&cur, &m).expect("detected kink must be removable");
            trace.push(m);
            continue;
        }
        if let Some(&(x, y)) = r2_removable(&cur).first() {
            let m = MoveSpec::R2Minus { x, y };
            cur = apply(&cur, &m).expect("detected pair must be removable");
            trace.push(m);
            continue;
        }
        return (cur, trace);
    }
}

/// Enumerates legal moves.  Insertions are included only while they keep the
/// chord count within `max_chords`.
pub fn legal_moves(d: &GaussDiagram, table: &R3Table, max_chords: usize) -> Vec<MoveSpec> {
    let mut out = Vec::new();
    for chord in r1_removable(d) {
        out.push(MoveSpec::R1Minus { chord });
    }
    for (x, y) in r2_removable(d) {
        out.push(MoveSpec::R2Minus { x, y });
    }
    let ids: Vec<ChordId> = d.chord_ids().collect();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            for k in j + 1..ids.len() {
                let chords = [ids[i], ids[j], ids[k]];
                let count = table.placements(d, chords).map(|p| p.len()).unwrap_or(0);
                for variant in 0..count {
                    out.push(MoveSpec::R3 { chords, variant });
                }
            }
        }
    }
    let gaps: Vec<Gap> = d
        .circles()
        .iter()
        .enumerate()
        .flat_map(|(c, circle)| {
            (0..circle.len().max(1)).map(move |i| Gap {
                circle: c,
                index: i,
            })
        })
        .collect();
    if d.chord_count() < max_chords {
        for &gap in &gaps {
            for sign in [Sign::Plus, Sign::Minus] {
                for tail_first in [true, false] {
                    out.push(MoveSpec::R1Plus {
                        gap,
                        sign,
                        tail_first,
                    });
                }
            }
        }
    }
    if d.chord_count() + 2 <= max_chords {
        for &a in &gaps {
            for &b in &gaps {
                for sign in [Sign::Plus, Sign::Minus] {
                    for parallel in [false, true] {
                        out.push(MoveSpec::R2Plus {
                            a,
                            b,
                            sign,
                            parallel,
                        });
                    }
                }
            }
        }
    }
    out
}
