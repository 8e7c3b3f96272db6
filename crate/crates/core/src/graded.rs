//! The graded matrix of a Gauss diagram and the graded genus.
//!
//! The graded matrix is a skew-symmetric integer pairing on the chords
//! together with one distinguished generator `s`.  Chord/chord entries are
//! computed on the flat diagram (negative chords reversed): the pairing of
//! flat arrows `x = (a,b)` and `y = (c,d)` counts arrows from the open arc
//! `(ab)` to the open arc `(cd)` minus arrows the other way, corrected by
//! `+1` when `c` separates `a` from `b` and `-1` when `d` does.  The `s`
//! column carries the chord indices.
//!
//! The graded genus is the minimum, over simple graded fillings (partitions
//! of the chords into singletons and opposite-sign pairs, together with
//! `s`), of half the integer rank of the filled matrix.

use crate::diagram::{ChordId, GaussDiagram, Sign};
use crate::invariants::index;
use crate::{Error, Result};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

/// The graded matrix: row/column 0 is `s`, the rest follow the chords in
/// first-encounter order from the basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    chords: Vec<ChordId>,
    signs: Vec<Sign>,
    entries: Vec<i64>,
}

impl GradedMatrix {
    /// Builds a graded matrix from raw parts, validating shape, zero
    /// diagonal and skew symmetry.
    pub fn from_parts(chords: Vec<ChordId>, signs: Vec<Sign>, entries: Vec<i64>) -> Result<Self> {
        let n = chords.len();
        if signs.len() != n || entries.len() != (n + 1) * (n + 1) {
            return Err(Error::IllegalMove(
                "graded matrix shape mismatch".to_string(),
            ));
        }
        let m = GradedMatrix {
            chords,
            signs,
            entries,
        };
        for i in 0..=n {
            if m.entry(i, i) != 0 {
                return Err(Error::IllegalMove(
                    "graded matrix diagonal must vanish".to_string(),
                ));
            }
            for j in 0..=n {
                if m.entry(i, j) != -m.entry(j, i) {
                    return Err(Error::IllegalMove("graded matrix must be skew".to_string()));
                }
            }
        }
        Ok(m)
    }

    /// Number of chord generators (the matrix is `(n+1) x (n+1)`).
    pub fn chord_len(&self) -> usize {
        self.chords.len()
    }

    pub fn chords(&self) -> &[ChordId] {
        &self.chords
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Entry by generator index: 0 is `s`, chord `k` sits at `k + 1`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * (self.chords.len() + 1) + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// The matrix of the mirror: all signs and all entries negated.
    pub fn negate(&self) -> GradedMatrix {
        GradedMatrix {
            chords: self.chords.clone(),
            signs: self.signs.iter().map(|s| s.flipped()).collect(),
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    fn delete_rows(&self, drop: &[usize]) -> GradedMatrix {
        // `drop` holds chord indices (0-based among chords).
        let keep: Vec<usize> = (0..self.chords.len())
            .filter(|i| !drop.contains(i))
            .collect();
        let mut chords = Vec::with_capacity(keep.len());
        let mut signs = Vec::with_capacity(keep.len());
        for &k in &keep {
            chords.push(self.chords[k]);
            signs.push(self.signs[k]);
        }
        let gens: Vec<usize> = core::iter::once(0)
            .chain(keep.iter().map(|k| k + 1))
            .collect();
        let mut entries = Vec::with_capacity(gens.len() * gens.len());
        for &i in &gens {
            for &j in &gens {
                entries.push(self.entry(i, j));
            }
        }
        GradedMatrix {
            chords,
            signs,
            entries,
        }
    }

    /// Removes chords that cannot affect the graded genus, repeatedly:
    /// a chord whose row vanishes, a chord whose row equals the `s` row,
    /// and an opposite-sign pair whose rows sum to the `s` row.
    pub fn primitive_reduce(&self) -> GradedMatrix {
        let mut cur = self.clone();
        'outer: loop {
            let n = cur.chords.len();
            let gens = n + 1;
            let row_eq = |m: &GradedMatrix, i: usize, j: usize| {
                (0..gens).all(|k| m.entry(i, k) == m.entry(j, k))
            };
            for i in 0..n {
                if (0..gens).all(|k| cur.entry(i + 1, k) == 0) {
                    cur = cur.delete_rows(&[i]);
                    continue 'outer;
                }
            }
            for i in 0..n {
                if row_eq(&cur, i + 1, 0) {
                    cur = cur.delete_rows(&[i]);
                    continue 'outer;
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    if cur.signs[i] == cur.signs[j] {
                        continue;
                    }
                    if (0..gens)
                        .all(|k| cur.entry(i + 1, k) + cur.entry(j + 1, k) == cur.entry(0, k))
                    {
                        cur = cur.delete_rows(&[i, j]);
                        continue 'outer;
                    }
                }
            }
            return cur;
        }
    }
}

/// Computes the graded matrix of a single-circle diagram.
pub fn graded_matrix(d: &GaussDiagram) -> Result<GradedMatrix> {
    let circle = d.single_circle()?;
    let len = circle.len();
    // Chords in first-encounter order, with flat arrows (negative reversed).
    let mut chords: Vec<ChordId> = Vec::new();
    for ep in circle {
        if !chords.contains(&ep.chord) {
            chords.push(ep.chord);
        }
    }
    let n = chords.len();
    let mut signs = Vec::with_capacity(n);
    let mut flat = Vec::with_capacity(n);
    let mut inds = Vec::with_capacity(n);
    for &c in &chords {
        let s = d.sign(c)?;
        signs.push(s);
        let (t, h) = d.chord_ends(c)?;
        let (a, b) = match s {
            Sign::Plus => (t.index, h.index),
            Sign::Minus => (h.index, t.index),
        };
        flat.push((a, b));
        // The index of the flat arrow: reversing a negative chord swaps the
        // arc it is measured over, negating the signed index.
        inds.push(index(d, c)? * s.value());
    }
    let on_arc = |a: usize, b: usize, p: usize| -> bool {
        if p == a || p == b {
            return false;
        }
        let rel_b = (b + len - a) % len;
        let rel_p = (p + len - a) % len;
        rel_p < rel_b
    };
    let mut entries = vec![0i64; (n + 1) * (n + 1)];
    let set = |i: usize, j: usize, v: i64, entries: &mut Vec<i64>| {
        entries[i * (n + 1) + j] = v;
    };
    for (i, &ind) in inds.iter().enumerate() {
        set(i + 1, 0, ind, &mut entries);
        set(0, i + 1, -ind, &mut entries);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = flat[i];
            let (c, dd) = flat[j];
            let mut dot = 0i64;
            for &(zt, zh) in &flat {
                if on_arc(a, b, zt) && on_arc(c, dd, zh) {
                    dot += 1;
                }
                if on_arc(c, dd, zt) && on_arc(a, b, zh) {
                    dot -= 1;
                }
            }
            let eps = if on_arc(a, b, c) && !on_arc(a, b, dd) {
                1
            } else if on_arc(a, b, dd) && !on_arc(a, b, c) {
                -1
            } else {
                0
            };
            set(i + 1, j + 1, dot + eps, &mut entries);
        }
    }
    let m = GradedMatrix {
        chords,
        signs,
        entries,
    };
    debug_assert!(
        (0..=n).all(|i| (0..=n).all(|j| m.entry(i, j) == -m.entry(j, i))),
        "graded pairing must be skew-symmetric"
    );
    Ok(m)
}

/// One generator of a simple graded filling; indices refer to chord rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillingGen {
    S,
    Single(usize),
    Pair(usize, usize),
}

/// A simple graded filling: `s` plus a partition of the chords into
/// singletons and opposite-sign pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filling {
    pub gens: Vec<FillingGen>,
}

/// All simple graded fillings for the given chord signs, ordered by
/// increasing pair count.
pub fn enumerate_simple_fillings(signs: &[Sign]) -> Vec<Filling> {
    let n = signs.len();
    let mut out: Vec<Filling> = Vec::new();
    let mut used = vec![false; n];
    let mut gens: Vec<FillingGen> = vec![FillingGen::S];
    fn recurse(
        signs: &[Sign],
        used: &mut [bool],
        gens: &mut Vec<FillingGen>,
        out: &mut Vec<Filling>,
    ) {
        let n = signs.len();
        let Some(first) = (0..n).find(|&i| !used[i]) else {
            out.push(Filling { gens: gens.clone() });
            return;
        };
        used[first] = true;
        gens.push(FillingGen::Single(first));
        recurse(signs, used, gens, out);
        gens.pop();
        for j in first + 1..n {
            if !used[j] && signs[j] != signs[first] {
                used[j] = true;
                gens.push(FillingGen::Pair(first, j));
                recurse(signs, used, gens, out);
                gens.pop();
                used[j] = false;
            }
        }
        used[first] = false;
    }
    recurse(signs, &mut used, &mut gens, &mut out);
    out.sort_by_key(|f| {
        f.gens
            .iter()
            .filter(|g| matches!(g, FillingGen::Pair(..)))
            .count()
    });
    out
}

/// The filled matrix `B(u,v)` over the filling generators, by bilinearity.
pub fn filling_matrix(m: &GradedMatrix, filling: &Filling) -> Vec<Vec<i64>> {
    let gen_rows = |g: &FillingGen| -> Vec<usize> {
        match *g {
            FillingGen::S => vec![0],
            FillingGen::Single(i) => vec![i + 1],
            FillingGen::Pair(i, j) => vec![i + 1, j + 1],
        }
    };
    let k = filling.gens.len();
    let mut out = vec![vec![0i64; k]; k];
    for (i, gi) in filling.gens.iter().enumerate() {
        for (j, gj) in filling.gens.iter().enumerate() {
            let mut v = 0;
            for &r in &gen_rows(gi) {
                for &c in &gen_rows(gj) {
                    v += m.entry(r, c);
                }
            }
            out[i][j] = v;
        }
    }
    out
}

/// Integer rank by fraction-free (Bareiss) elimination in 128-bit
/// arithmetic; exact for every matrix within reach of this crate.
pub fn integer_rank(matrix: &[Vec<i64>]) -> Result<usize> {
    let rows = matrix.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = matrix[0].len();
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = a[r][c]
                    .checked_mul(a[rank][col])
                    .zip(a[r][col].checked_mul(a[rank][c]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(Error::Overflow)?;
                a[r][c] = num / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}

/// The integer rank of the filled matrix; always even, because the filled
/// matrix inherits skew-symmetry.
pub fn filling_rank(m: &GradedMatrix, filling: &Filling) -> Result<usize> {
    let b = filling_matrix(m, filling);
    let rank = integer_rank(&b)?;
    debug_assert!(rank % 2 == 0, "skew-symmetric matrices have even rank");
    Ok(rank)
}

/// The graded genus of a graded matrix: the minimum of half
/// [`filling_rank`] over all simple graded fillings, after primitive
/// reduction.
pub fn graded_genus_of(m: &GradedMatrix) -> Result<usize> {
    let reduced = m.primitive_reduce();
    let mut best = usize::MAX;
    for filling in enumerate_simple_fillings(reduced.signs()) {
        let t = filling_rank(&reduced, &filling)? / 2;
        if t < best {
            best = t;
            if best == 0 {
                break;
            }
        }
    }
    Ok(best)
}

/// The graded genus of a diagram.
pub fn graded_genus(d: &GaussDiagram) -> Result<usize> {
    graded_genus_of(&graded_matrix(d)?)
}

/// Searches for a small obstruction to concordance of two knots via the
/// block matrix of `T1` and the negation of `T2`.
///
/// Fillings pair chords across the blocks; the mandatory generator is
/// `s1 + s2`.  All simple fillings are searched without shifts.  Generators
/// shifted by `c1*s1 + c2*s2` with `|ci| <= coeff_bound` are explored
/// exhaustively when the chord count is at most four, and by a pruned
/// search for an all-zero filling otherwise.  Returns the minimum half-rank
/// found: `0` certifies that this bounded obstruction vanishes, positive
/// values are inconclusive.
pub fn concordance_obstruction_bound(
    t1: &GradedMatrix,
    t2: &GradedMatrix,
    coeff_bound: i64,
) -> Result<usize> {
    let neg2 = t2.negate();
    let n1 = t1.chord_len();
    let n2 = neg2.chord_len();
    let n = n1 + n2;
    // Basis: s1, s2, chords of t1, chords of neg2 — with zero cross pairing.
    let dim = n + 2;
    let mut big = vec![vec![0i64; dim]; dim];
    for i in 0..=n1 {
        for j in 0..=n1 {
            let bi = if i == 0 { 0 } else { i + 1 };
            let bj = if j == 0 { 0 } else { j + 1 };
            big[bi][bj] = t1.entry(i, j);
        }
    }
    for i in 0..=n2 {
        for j in 0..=n2 {
            let bi = if i == 0 { 1 } else { n1 + i + 1 };
            let bj = if j == 0 { 1 } else { n1 + j + 1 };
            big[bi][bj] = neg2.entry(i, j);
        }
    }
    let signs: Vec<Sign> = t1
        .signs()
        .iter()
        .copied()
        .chain(neg2.signs().iter().copied())
        .collect();
    // A generator is a vector over the basis; rows of the filled matrix are
    // bilinear combinations.
    let pair_value = |u: &Vec<i64>, v: &Vec<i64>| -> i64 {
        let mut acc = 0;
        for (i, &ci) in u.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &cj) in v.iter().enumerate() {
                if cj != 0 {
                    acc += ci * big[i][j] * cj;
                }
            }
        }
        acc
    };
    let s_gen = {
        let mut v = vec![0i64; dim];
        v[0] = 1;
        v[1] = 1;
        v
    };
    let base_vec = |g: &FillingGen, c1: i64, c2: i64| -> Vec<i64> {
        let mut v = vec![0i64; dim];
        v[0] = c1;
        v[1] = c2;
        match *g {
            FillingGen::S => {
                v[0] += 1;
                v[1] += 1;
            }
            FillingGen::Single(i) => v[i + 2] = 1,
            FillingGen::Pair(i, j) => {
                v[i + 2] = 1;
                v[j + 2] = 1;
            }
        }
        v
    };
    let fillings = enumerate_simple_fillings(&signs);
    let mut best = usize::MAX;
    let shift_range: Vec<i64> = (-coeff_bound..=coeff_bound).collect();
    let exhaustive = n <= 4;
    for filling in &fillings {
        // Unshifted half-rank.
        let vecs: Vec<Vec<i64>> = filling.gens.iter().map(|g| base_vec(g, 0, 0)).collect();
        let k = vecs.len();
        let mut b = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                b[i][j] = pair_value(&vecs[i], &vecs[j]);
            }
        }
        let r = integer_rank(&b)? / 2;
        best = best.min(r);
        if best == 0 {
            return Ok(0);
        }
        // Shifted search: the s generator is fixed, others range over shifts.
        let chord_gens: Vec<&FillingGen> = filling
            .gens
            .iter()
            .filter(|g| !matches!(g, FillingGen::S))
            .collect();
        if exhaustive {
            let mut shifts = vec![(0i64, 0i64); chord_gens.len()];
            // Odometer over shift assignments.
            let total = shift_range.len().pow(2 * chord_gens.len() as u32);
            for idx in 0..total {
                let mut rem = idx;
                for s in shifts.iter_mut() {
                    let c1 = shift_range[rem % shift_range.len()];
                    rem /= shift_range.len();
                    let c2 = shift_range[rem % shift_range.len()];
                    rem /= shift_range.len();
                    *s = (c1, c2);
                }
                let mut vecs: Vec<Vec<i64>> = vec![s_gen.clone()];
                for (g, &(c1, c2)) in chord_gens.iter().zip(&shifts) {
                    vecs.push(base_vec(g, c1, c2));
                }
                let k = vecs.len();
                let mut b = vec![vec![0i64; k]; k];
                for i in 0..k {
                    for j in 0..k {
                        b[i][j] = pair_value(&vecs[i], &vecs[j]);
                    }
                }
                let r = integer_rank(&b)? / 2;
                best = best.min(r);
                if best == 0 {
                    return Ok(0);
                }
            }
        } else if zero_filling_search(&chord_gens, &s_gen, &base_vec, &pair_value, &shift_range) {
            return Ok(0);
        }
    }
    Ok(best)
}

/// Depth-first search for shifts making every pairing vanish.
fn zero_filling_search(
    chord_gens: &[&FillingGen],
    s_gen: &[i64],
    base_vec: &dyn Fn(&FillingGen, i64, i64) -> Vec<i64>,
    pair_value: &dyn Fn(&Vec<i64>, &Vec<i64>) -> i64,
    shift_range: &[i64],
) -> bool {
    fn rec(
        gens: &[&FillingGen],
        chosen: &mut Vec<Vec<i64>>,
        base_vec: &dyn Fn(&FillingGen, i64, i64) -> Vec<i64>,
        pair_value: &dyn Fn(&Vec<i64>, &Vec<i64>) -> i64,
        shift_range: &[i64],
    ) -> bool {
        let Some((g, rest)) = gens.split_first() else {
            return true;
        };
        for &c1 in shift_range {
            for &c2 in shift_range {
                let v = base_vec(g, c1, c2);
                if chosen.iter().all(|u| pair_value(u, &v) == 0) {
                    chosen.push(v);
                    if rec(rest, chosen, base_vec, pair_value, shift_range) {
                        return true;
                    }
                    chosen.pop();
                }
            }
        }
        false
    }
    let mut chosen = vec![s_gen.to_vec()];
    rec(chord_gens, &mut chosen, base_vec, pair_value, shift_range)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(code: &str) -> GaussDiagram {
        GaussDiagram::parse_gauss_code(code).unwrap()
    }

    #[test]
    fn two_crossing_matrix() {
        let m = graded_matrix(&parse("O1+O2+U1+U2+")).unwrap();
        assert_eq!(m.chord_len(), 2);
        // s row: indices are +1 and -1.
        assert_eq!(m.entry(1, 0), 1);
        assert_eq!(m.entry(2, 0), -1);
        assert_eq!(m.entry(0, 1), -1);
        // The interleaved pair contributes only the separation term +1.
        assert_eq!(m.entry(1, 2), 1);
        assert_eq!(m.entry(2, 1), -1);
        // One filling (both chords positive); its filled matrix has rank 2.
        let fillings = enumerate_simple_fillings(m.signs());
        assert_eq!(fillings.len(), 1);
        assert_eq!(filling_rank(&m, &fillings[0]).unwrap(), 2);
    }

    #[test]
    fn trefoil_matrix_vanishes() {
        let m = graded_matrix(&parse("O1+U2+O3+U1+O2+U3+")).unwrap();
        assert!(m.is_zero());
        assert_eq!(graded_genus_of(&m).unwrap(), 0);
    }

    #[test]
    fn filling_counts() {
        use crate::diagram::Sign::{Minus, Plus};
        assert_eq!(enumerate_simple_fillings(&[Plus, Plus]).len(), 1);
        assert_eq!(enumerate_simple_fillings(&[Plus, Minus]).len(), 2);
        assert_eq!(enumerate_simple_fillings(&[Plus, Plus, Minus]).len(), 3);
        // 2 plus, 2 minus: 1 + 4 + 2 = 7.
        assert_eq!(
            enumerate_simple_fillings(&[Plus, Plus, Minus, Minus]).len(),
            7
        );
        // 3 plus, 3 minus: sum_k C(3,k)^2 k! = 1 + 9 + 18 + 6 = 34.
        assert_eq!(
            enumerate_simple_fillings(&[Plus, Plus, Plus, Minus, Minus, Minus]).len(),
            34
        );
    }

    #[test]
    fn graded_genus_of_two_crossing_knot() {
        assert_eq!(graded_genus(&parse("O1+O2+U1+U2+")).unwrap(), 1);
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(integer_rank(&[vec![0, 1], vec![-1, 0]]).unwrap(), 2);
        assert_eq!(integer_rank(&[vec![0, 0], vec![0, 0]]).unwrap(), 0);
        let m = vec![vec![0, 2, 3], vec![-2, 0, 5], vec![-3, -5, 0]];
        assert_eq!(integer_rank(&m).unwrap(), 2);
    }

    #[test]
    fn primitive_reduction_drops_zero_rows() {
        let d = parse("O1+U2+O3+U1+O2+U3+");
        let m = graded_matrix(&d).unwrap();
        let reduced = m.primitive_reduce();
        assert_eq!(reduced.chord_len(), 0);
    }

    #[test]
    fn self_obstruction_vanishes() {
        for code in ["O1+O2+U1+U2+", "O1+U2+O3+U1+O2+U3+", "O1+O2-O3+U1+U3+U2-"] {
            let m = graded_matrix(&parse(code)).unwrap();
            assert_eq!(concordance_obstruction_bound(&m, &m, 1).unwrap(), 0);
        }
    }

    #[test]
    fn unknot_obstruction_detects_two_crossing_knot() {
        let m = graded_matrix(&parse("O1+O2+U1+U2+")).unwrap();
        let u = graded_matrix(&GaussDiagram::unknot()).unwrap();
        assert!(concordance_obstruction_bound(&m, &u, 1).unwrap() > 0);
        assert!(concordance_obstruction_bound(&m, &u, 2).unwrap() > 0);
    }

    #[test]
    fn graded_genus_matches_published_small_table() {
        // Codes from Green's table with their published graded genus.
        for (code, theta) in [
            ("O1+O2+U1+U2+", 1),
            ("O1+O2+O3+U1+U3+U2+", 2),
            ("O1+U2+O3+U1+O2+U3+", 0),
            ("O1+O2+O3+O4+U1+U3+U4+U2+", 2),
            ("O1+O2+O3-O4-U2+U1+U4-U3-", 0),
        ] {
            assert_eq!(graded_genus(&parse(code)).unwrap(), theta, "{code}");
        }
    }

    #[test]
    fn negate_flips_signs_and_pairing() {
        let m = graded_matrix(&parse("O1+O2+U1+U2+")).unwrap();
        let n = m.negate();
        assert!(n.signs().iter().all(|s| *s == Sign::Minus));
        assert_eq!(n.entry(1, 2), -m.entry(1, 2));
        assert_eq!(n.entry(1, 0), -m.entry(1, 0));
        assert_eq!(n.negate(), m);
        assert_eq!(graded_genus_of(&n).unwrap(), graded_genus_of(&m).unwrap());
    }

    #[test]
    fn two_crossing_matrix_is_already_primitive() {
        let m = graded_matrix(&parse("O1+O2+U1+U2+")).unwrap();
        assert_eq!(m.primitive_reduce(), m);
    }

    #[test]
    fn slice_knot_obstruction_against_unknot_vanishes() {
        // A genus-zero four-crossing knot: nothing obstructs concordance
        // to the unknot.
        let m = graded_matrix(&parse("O1+O2+O3-O4-U2+U1+U4-U3-")).unwrap();
        let u = graded_matrix(&GaussDiagram::unknot()).unwrap();
        assert_eq!(concordance_obstruction_bound(&m, &u, 1).unwrap(), 0);
    }
}
