//! Gelfand-Tsetlin tableaux, difference coordinates, the move calculus and
//! the sweep-path algorithms used to navigate the spectral graph.
//!
//! A tableau is a triangular integer array with interlacing rows; the crate
//! works with canonical representatives (top-right entry zero) of the shift
//! equivalence classes throughout.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Decreasing vector of `l+1` nonnegative integers indexing a representation
/// type. Canonical form has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct YoungDiagram {
    parts: Vec<i32>,
}

impl YoungDiagram {
    pub fn new(parts: Vec<i32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Invalid("Young diagram needs at least one part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || *parts.last().unwrap() < 0 {
            return Err(Error::Invalid(format!("parts not decreasing/nonnegative: {parts:?}")));
        }
        Ok(YoungDiagram { parts })
    }

    pub fn zero(ell: usize) -> Self {
        YoungDiagram { parts: vec![0; ell + 1] }
    }

    pub fn parts(&self) -> &[i32] {
        &self.parts
    }

    pub fn ell(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn first(&self) -> i32 {
        self.parts[0]
    }

    pub fn is_canonical(&self) -> bool {
        *self.parts.last().unwrap() == 0
    }

    /// Shift-equivalent representative with trailing part zero.
    pub fn canonicalize(&self) -> Self {
        let t = *self.parts.last().unwrap();
        YoungDiagram { parts: self.parts.iter().map(|p| p - t).collect() }
    }

    /// Exact dimension of the irreducible indexed by this diagram,
    /// `prod_{i<j} (lambda_i - lambda_j + j - i) / (j - i)`.
    pub fn dim(&self) -> u128 {
        let n = self.parts.len();
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for i in 0..n {
            for j in (i + 1)..n {
                num *= (self.parts[i] - self.parts[j] + (j as i32) - (i as i32)) as u128;
                den *= (j - i) as u128;
            }
        }
        debug_assert_eq!(num % den, 0);
        num / den
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Triangular integer array `r_{ij}`, row `i` of length `l+2-i`, with
/// `r_{ij} >= r_{i+1,j} >= r_{i,j+1} >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GtTableau {
    rows: Vec<Vec<i32>>,
}

impl GtTableau {
    /// Builds a tableau from rows, validating shape and interlacing.
    pub fn new(rows: Vec<Vec<i32>>) -> Result<Self> {
        let t = GtTableau { rows };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rows.len();
        if n == 0 {
            return Err(Error::Invalid("empty tableau".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n - i {
                return Err(Error::Invalid(format!("row {} has wrong length", i + 1)));
            }
        }
        if !self.interlaces() {
            return Err(Error::Invalid(format!("interlacing fails: {self}")));
        }
        Ok(())
    }

    /// Interlacing test on raw entries (no canonicity requirement).
    pub fn interlaces(&self) -> bool {
        let n = self.rows.len();
        for i in 0..n {
            for j in 0..self.rows[i].len() {
                if self.rows[i][j] < 0 {
                    return false;
                }
                if i + 1 < n && j < self.rows[i + 1].len() && self.rows[i][j] < self.rows[i + 1][j] {
                    return false;
                }
                if i + 1 < n && j + 1 < self.rows[i].len() && self.rows[i + 1][j] < self.rows[i][j + 1] {
                    return false;
                }
            }
        }
        true
    }

    /// The all-zero tableau of rank `ell`.
    pub fn zero(ell: usize) -> Self {
        GtTableau { rows: (0..=ell).map(|i| vec![0; ell + 1 - i]).collect() }
    }

    /// The tableau `r^{nk}`: top-left entry `n+k`, top-right `0`, every other
    /// entry `k`.
    pub fn sphere(n: i32, k: i32, ell: usize) -> Self {
        let mut rows: Vec<Vec<i32>> = (0..=ell).map(|i| vec![k; ell + 1 - i]).collect();
        rows[0][0] = n + k;
        let last = ell;
        rows[0][last] = 0;
        GtTableau { rows }
    }

    pub fn ell(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<i32>] {
        &self.rows
    }

    /// Row `a` (1-based) as a slice.
    pub fn row(&self, a: usize) -> &[i32] {
        &self.rows[a - 1]
    }

    /// Entry `r_{ab}` with 1-based indices.
    pub fn entry(&self, a: usize, b: usize) -> i32 {
        self.rows[a - 1][b - 1]
    }

    pub fn top(&self) -> YoungDiagram {
        YoungDiagram { parts: self.rows[0].clone() }
    }

    /// Top-left entry of the canonical representative.
    pub fn r11(&self) -> i32 {
        self.rows[0][0] - self.rows[0][self.ell()]
    }

    pub fn is_canonical(&self) -> bool {
        self.rows[0][self.ell()] == 0
    }

    /// Shift-equivalent representative with top-right entry zero.
    pub fn canonicalize(&self) -> Self {
        let t = self.rows[0][self.ell()];
        if t == 0 {
            return self.clone();
        }
        GtTableau {
            rows: self.rows.iter().map(|row| row.iter().map(|x| x - t).collect()).collect(),
        }
    }

    /// Vertical difference `V_{a1} = r_{a1} - r_{a+1,1}`, `1 <= a <= l`.
    pub fn v(&self, a: usize) -> i32 {
        self.rows[a - 1][0] - self.rows[a][0]
    }

    /// Diagonal difference `H_{ab} = r_{a+1,b} - r_{a,b+1}`,
    /// `1 <= a <= l`, `1 <= b <= l+1-a`.
    pub fn h(&self, a: usize, b: usize) -> i32 {
        self.rows[a][b - 1] - self.rows[a - 1][b]
    }

    /// Smallest `H`-entry in column `b`.
    pub fn min_h_col(&self, b: usize) -> i32 {
        let ell = self.ell();
        (1..=(ell + 1 - b)).map(|a| self.h(a, b)).min().unwrap()
    }

    /// Twice the linear functional `psi` (which may be half-integral):
    /// `2 psi = -l * sum(row 1) + 2 * sum(rows 2..)`.
    pub fn psi2(&self) -> i64 {
        let ell = self.ell() as i64;
        let top: i64 = self.rows[0].iter().map(|&x| x as i64).sum();
        let rest: i64 = self.rows[1..].iter().flatten().map(|&x| x as i64).sum();
        -ell * top + 2 * rest
    }

    /// Difference coordinates of the shift class.
    pub fn coords(&self) -> DiffCoords {
        let ell = self.ell();
        DiffCoords {
            v: (1..=ell).map(|a| self.v(a)).collect(),
            h: (1..=ell).map(|a| (1..=(ell + 1 - a)).map(|b| self.h(a, b)).collect()).collect(),
        }
    }
}

impl fmt::Display for GtTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl FromStr for GtTableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<i32>> = serde_json::from_str(s)
            .map_err(|e| Error::Invalid(format!("cannot parse tableau {s:?}: {e}")))?;
        GtTableau::new(rows)
    }
}

/// Nonnegative difference coordinates `(V_{a1}; H_{ab})` of a shift class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffCoords {
    /// `V_{11}, ..., V_{l,1}`.
    pub v: Vec<i32>,
    /// `h[a-1][b-1] = H_{ab}` for `1 <= a <= l`, `1 <= b <= l+1-a`.
    pub h: Vec<Vec<i32>>,
}

impl DiffCoords {
    pub fn ell(&self) -> usize {
        self.v.len()
    }

    /// Reconstructs the canonical tableau, failing when the coordinates do
    /// not describe a valid interlacing pattern.
    pub fn to_tableau(&self) -> Result<GtTableau> {
        let ell = self.ell();
        if self.h.len() != ell || self.h.iter().enumerate().any(|(i, r)| r.len() != ell - i) {
            return Err(Error::Invalid("coordinate array has wrong shape".into()));
        }
        if self.v.iter().chain(self.h.iter().flatten()).any(|&x| x < 0) {
            return Err(Error::Invalid("coordinates must be nonnegative".into()));
        }
        let mut rows: Vec<Vec<i32>> = (0..=ell).map(|i| vec![0; ell + 1 - i]).collect();
        // bottom-left entry equals the sum of the antidiagonal H's
        rows[ell][0] = (1..=ell).map(|a| self.h[a - 1][ell - a]).sum();
        for a in (1..=ell).rev() {
            rows[a - 1][0] = rows[a][0] + self.v[a - 1];
            for b in 1..=(ell + 1 - a) {
                rows[a - 1][b] = rows[a][b - 1] - self.h[a - 1][b - 1];
            }
        }
        let t = GtTableau { rows };
        t.validate().map_err(|_| {
            Error::Invalid(format!("coordinates violate the interlacing inequalities: {self:?}"))
        })?;
        Ok(t)
    }
}

/// A staircase increment pattern `(m_1, ..., m_k)`: entry `m_j` names the
/// position raised by one in row `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    steps: Vec<u8>,
}

impl Move {
    pub fn new(steps: Vec<u8>) -> Self {
        Move { steps }
    }

    pub fn steps(&self) -> &[u8] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `M_{ik} = (i, i-1, ..., i-k+1)` of length `k`; requires `k <= i <= l+1`.
    pub fn m_family(i: usize, k: usize, ell: usize) -> Option<Move> {
        if k == 0 || k > i || i > ell + 1 {
            return None;
        }
        Some(Move { steps: (0..k).map(|j| (i - j) as u8).collect() })
    }

    /// `N_{ik}`: `k` entries equal to `i+1` followed by entries equal to `i`,
    /// total length `l+2-i`; requires `k <= l+1-i` (any `k` for `i = l+1`
    /// degenerates to length one).
    pub fn n_family(i: usize, k: usize, ell: usize) -> Option<Move> {
        if i == 0 || i > ell + 1 {
            return None;
        }
        let len = ell + 2 - i;
        if k >= len {
            return None;
        }
        let mut steps = vec![(i + 1) as u8; k];
        steps.extend(std::iter::repeat(i as u8).take(len - k));
        Some(Move { steps })
    }

    /// Raises the prescribed entries without canonicalizing; `None` when the
    /// result fails interlacing.
    pub fn apply_raw(&self, r: &GtTableau) -> Option<GtTableau> {
        let ell = r.ell();
        if self.steps.len() > ell + 1 {
            return None;
        }
        let mut rows = r.rows.clone();
        for (j, &m) in self.steps.iter().enumerate() {
            let m = m as usize;
            if m == 0 || m > ell + 1 - j {
                return None;
            }
            rows[j][m - 1] += 1;
        }
        let t = GtTableau { rows };
        if t.interlaces() {
            Some(t)
        } else {
            None
        }
    }

    /// Raises entries and re-canonicalizes the result.
    pub fn apply(&self, r: &GtTableau) -> Option<GtTableau> {
        self.apply_raw(r).map(|t| t.canonicalize())
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// All candidate moves of a given length for rank `ell` (entry `m_j` ranges
/// over `1..=l+2-j`), in lexicographic order.
pub fn enumerate_moves(len: usize, ell: usize) -> Vec<Move> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(len);
    fn rec(out: &mut Vec<Move>, cur: &mut Vec<u8>, len: usize, ell: usize) {
        if cur.len() == len {
            out.push(Move { steps: cur.clone() });
            return;
        }
        let j = cur.len();
        for m in 1..=(ell + 1 - j) {
            cur.push(m as u8);
            rec(out, cur, len, ell);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, len, ell);
    out
}

/// All tableaux with the given top row, in lexicographic row-major order.
/// The count equals `lambda.dim()`.
pub fn enumerate_tableaux(lambda: &YoungDiagram) -> Vec<GtTableau> {
    let ell = lambda.ell();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<i32>> = vec![lambda.parts().to_vec()];
    fn rec(out: &mut Vec<GtTableau>, rows: &mut Vec<Vec<i32>>, ell: usize) {
        if rows.len() == ell + 1 {
            out.push(GtTableau { rows: rows.clone() });
            return;
        }
        let i = rows.len();
        let prev = rows[i - 1].clone();
        let len = ell + 1 - i;
        let mut next = vec![0i32; len];
        fn fill(
            out: &mut Vec<GtTableau>,
            rows: &mut Vec<Vec<i32>>,
            prev: &[i32],
            next: &mut Vec<i32>,
            j: usize,
            ell: usize,
        ) {
            if j == next.len() {
                rows.push(next.clone());
                rec(out, rows, ell);
                rows.pop();
                return;
            }
            for x in prev[j + 1]..=prev[j] {
                next[j] = x;
                fill(out, rows, prev, next, j + 1, ell);
            }
        }
        fill(out, rows, &prev, &mut next, 0, ell);
    }
    rec(&mut out, &mut rows, ell);
    out
}

/// Canonical Young diagrams of rank `ell` with first part at most `max`,
/// in lexicographic order.
pub fn young_diagrams(ell: usize, max: i32) -> Vec<YoungDiagram> {
    let mut out = Vec::new();
    let mut parts = vec![0i32; ell + 1];
    fn rec(out: &mut Vec<YoungDiagram>, parts: &mut Vec<i32>, pos: usize, max: i32, ell: usize) {
        if pos == ell {
            out.push(YoungDiagram { parts: parts.clone() });
            return;
        }
        let hi = if pos == 0 { max } else { parts[pos - 1] };
        for x in 0..=hi {
            parts[pos] = x;
            rec(out, parts, pos + 1, max, ell);
        }
    }
    rec(&mut out, &mut parts, 0, max, ell);
    out.sort();
    out
}

/// Free-plane criterion: equal `V_{a1}` and, per column `b`, the difference
/// `H_{ab}(r) - H_{ab}(s)` independent of `a`.
pub fn same_free_plane(r: &GtTableau, s: &GtTableau) -> bool {
    let ell = r.ell();
    if s.ell() != ell {
        return false;
    }
    for a in 1..=ell {
        if r.v(a) != s.v(a) {
            return false;
        }
    }
    for b in 1..=ell {
        let d = r.h(1, b) - s.h(1, b);
        for a in 2..=(ell + 1 - b) {
            if r.h(a, b) - s.h(a, b) != d {
                return false;
            }
        }
    }
    true
}

/// Membership in the complementary axis: every `H`-column has a zero entry.
pub fn on_complementary_axis(r: &GtTableau) -> bool {
    (1..=r.ell()).all(|b| r.min_h_col(b) == 0)
}

fn push_step(path: &mut Vec<GtTableau>, mv: &Move) {
    let next = mv
        .apply(path.last().unwrap())
        .unwrap_or_else(|| panic!("sweep step {mv} invalid at {}", path.last().unwrap()));
    path.push(next);
}

/// Column sweep: `N_{j0}` steps inside the free plane of `r` ending at the
/// unique complementary-axis point of the plane. Consecutive path entries
/// differ by one elementary move.
pub fn sweep_to_axis(r: &GtTableau) -> Vec<GtTableau> {
    sweep_columns(r, 2)
}

/// Variant of [`sweep_to_axis`] leaving column 1 untouched, so `H_{a1}` (in
/// particular `H_{11}`) stays constant; only columns `b >= 2` are zeroed.
pub fn sweep_to_axis_keep_first(r: &GtTableau) -> Vec<GtTableau> {
    sweep_columns(r, 3)
}

fn sweep_columns(r: &GtTableau, first_j: usize) -> Vec<GtTableau> {
    let ell = r.ell();
    let mut path = vec![r.clone()];
    for j in first_j..=(ell + 1) {
        let mv = Move::n_family(j, 0, ell).unwrap();
        while path.last().unwrap().min_h_col(j - 1) > 0 {
            push_step(&mut path, &mv);
        }
    }
    path
}

/// Clears every coordinate except `V_{11}`, which stays literally constant
/// at every vertex of the returned path. Row `a` of `H` is cleared by
/// `M_{b+a,a}` steps (rightmost entry first), then the lower `V`'s are
/// drained by antidiagonal `M_{cc}` steps.
pub fn sweep_to_v11(r: &GtTableau) -> Vec<GtTableau> {
    let ell = r.ell();
    let mut path = clear_h_rows(r);
    for c in 3..=(ell + 1) {
        let mv = Move::m_family(c, c, ell).unwrap();
        while path.last().unwrap().v(c - 1) > 0 {
            push_step(&mut path, &mv);
        }
    }
    path
}

/// Path from `r` to the zero tableau through elementary moves whose exponents
/// all vanish; its length is at most `l * r11`.
pub fn path_to_zero(r: &GtTableau) -> Vec<GtTableau> {
    let ell = r.ell();
    let mut path = clear_h_rows(r);
    for c in 2..=(ell + 1) {
        let mv = Move::m_family(c, c, ell).unwrap();
        while path.last().unwrap().v(c - 1) > 0 {
            push_step(&mut path, &mv);
        }
    }
    path
}

fn clear_h_rows(r: &GtTableau) -> Vec<GtTableau> {
    let ell = r.ell();
    let mut path = vec![r.clone()];
    for a in 1..=ell {
        for b in (1..=(ell + 1 - a)).rev() {
            let mv = Move::m_family(a + b, a, ell).unwrap();
            while path.last().unwrap().h(a, b) > 0 {
                push_step(&mut path, &mv);
            }
        }
    }
    path
}

/// `r^{nk}` together with its matrix-entry column range: all tableaux with
/// top row `(n+k, k, ..., k, 0)`.
pub fn sphere_sector(n: i32, k: i32, ell: usize) -> Vec<GtTableau> {
    enumerate_tableaux(&sphere_top_row(n, k, ell))
}

/// Top row of the sphere sector `(n, k)`.
pub fn sphere_top_row(n: i32, k: i32, ell: usize) -> YoungDiagram {
    let mut parts = vec![k; ell + 1];
    parts[0] = n + k;
    parts[ell] = 0;
    YoungDiagram { parts }
}

/// Reads `(n, k)` off a sphere tableau: `n = V_11`, `k = r_{21}`.
pub fn sphere_nk(r: &GtTableau) -> (i32, i32) {
    (r.v(1), r.entry(2, 1))
}
