//! Truncated Hilbert-space bases for the group and sphere cases, sparse
//! left-multiplication operators assembled from Clebsch-Gordan data, and
//! relation-residual verification.
//!
//! Truncation is by the canonical top-left entry (`r11` for the group,
//! `n + k` for the sphere). Columns whose move images leave the window are
//! flagged, and all norms and residuals are taken over interior vectors
//! only, so truncation artifacts stay quarantined.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cgc::{cg_coefficient, kappa, DimTable};
use crate::qarith::QParam;
use crate::tableaux::{
    enumerate_moves, enumerate_tableaux, sphere_nk, sphere_top_row, GtTableau, Move,
    YoungDiagram,
};
use crate::{Error, Result};

/// Which Hilbert space a basis models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Space {
    Group,
    Sphere,
}

/// A truncated orthonormal basis indexed by pairs `(r, s)` of canonical
/// tableaux with equal top rows. Group: all pairs with `r11 <= cutoff`.
/// Sphere: `r = r^{nk}` with `n + k <= cutoff`, `s` in the sector of
/// `(n, k)`. Index order is lexicographic in (top row, r, s).
pub struct BasisSpec {
    ell: usize,
    space: Space,
    cutoff: i32,
    keys: Vec<(GtTableau, GtTableau)>,
    index: HashMap<(GtTableau, GtTableau), u32>,
}

impl BasisSpec {
    pub fn group(ell: usize, cutoff: i32) -> Arc<Self> {
        let mut keys = Vec::new();
        for lam in crate::tableaux::young_diagrams(ell, cutoff) {
            let tabs = enumerate_tableaux(&lam);
            for r in &tabs {
                for s in &tabs {
                    keys.push((r.clone(), s.clone()));
                }
            }
        }
        Arc::new(Self::from_keys(ell, Space::Group, cutoff, keys))
    }

    pub fn sphere(ell: usize, cutoff: i32) -> Arc<Self> {
        let mut keys = Vec::new();
        for m in 0..=cutoff {
            for k in 0..=m {
                let n = m - k;
                let r = GtTableau::sphere(n, k, ell);
                for s in enumerate_tableaux(&sphere_top_row(n, k, ell)) {
                    keys.push((r.clone(), s.clone()));
                }
            }
        }
        Arc::new(Self::from_keys(ell, Space::Sphere, cutoff, keys))
    }

    fn from_keys(ell: usize, space: Space, cutoff: i32, keys: Vec<(GtTableau, GtTableau)>) -> Self {
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect();
        BasisSpec { ell, space, cutoff, keys, index }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: u32) -> &(GtTableau, GtTableau) {
        &self.keys[i as usize]
    }

    pub fn keys(&self) -> &[(GtTableau, GtTableau)] {
        &self.keys
    }

    pub fn index_of(&self, key: &(GtTableau, GtTableau)) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// Truncation coordinate of a basis vector (canonical `r11`, which for
    /// sphere keys equals `n + k`).
    pub fn coord(&self, i: u32) -> i32 {
        self.keys[i as usize].0.r11()
    }

    /// A vector is interior at margin `m` when every single-move image stays
    /// within the cutoff reduced by `m`; images change the truncation
    /// coordinate by at most one.
    pub fn is_interior(&self, i: u32, margin: i32) -> bool {
        self.coord(i) + 1 <= self.cutoff - margin
    }

    pub fn interior_indices(&self, margin: i32) -> Result<Vec<u32>> {
        let v: Vec<u32> =
            (0..self.len() as u32).filter(|&i| self.is_interior(i, margin)).collect();
        if v.is_empty() {
            return Err(Error::EmptyInterior(format!(
                "no interior vectors at cutoff {} with margin {margin}; raise the cutoff",
                self.cutoff
            )));
        }
        Ok(v)
    }
}

/// Column-sorted sparse matrix over a truncated basis, with a transposed
/// copy for adjoint application. Entries are exact for every in-window
/// column; columns with clipped images carry a boundary flag.
pub struct SparseOperator {
    basis: Arc<BasisSpec>,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    val: Vec<f64>,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    val_t: Vec<f64>,
    boundary: Vec<bool>,
}

impl SparseOperator {
    /// Builds from per-column entry lists (rows need not be sorted).
    pub fn from_columns(
        basis: Arc<BasisSpec>,
        columns: Vec<Vec<(u32, f64)>>,
        boundary: Vec<bool>,
    ) -> Self {
        let n = basis.len();
        assert_eq!(columns.len(), n);
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        let mut val = Vec::new();
        col_ptr.push(0);
        for mut col in columns {
            col.sort_by_key(|e| e.0);
            for (r, v) in col {
                if v != 0.0 {
                    row_idx.push(r);
                    val.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        let (row_ptr, col_idx, val_t) = transpose_csc(n, &col_ptr, &row_idx, &val);
        SparseOperator { basis, col_ptr, row_idx, val, row_ptr, col_idx, val_t, boundary }
    }

    pub fn basis(&self) -> &Arc<BasisSpec> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn is_boundary_column(&self, j: u32) -> bool {
        self.boundary[j as usize]
    }

    pub fn column(&self, j: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
        let lo = self.col_ptr[j as usize];
        let hi = self.col_ptr[j as usize + 1];
        self.row_idx[lo..hi].iter().copied().zip(self.val[lo..hi].iter().copied())
    }

    pub fn row(&self, i: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
        let lo = self.row_ptr[i as usize];
        let hi = self.row_ptr[i as usize + 1];
        self.col_idx[lo..hi].iter().copied().zip(self.val_t[lo..hi].iter().copied())
    }

    pub fn entry(&self, i: u32, j: u32) -> f64 {
        let lo = self.col_ptr[j as usize];
        let hi = self.col_ptr[j as usize + 1];
        match self.row_idx[lo..hi].binary_search(&i) {
            Ok(p) => self.val[lo + p],
            Err(_) => 0.0,
        }
    }

    /// `y = A x` (dense), row-parallel and deterministic.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            let mut acc = 0.0;
            for p in lo..hi {
                acc += self.val_t[p] * x[self.col_idx[p] as usize];
            }
            *yi = acc;
        });
    }

    /// `y = A^T x` (dense); real entries, so this is the adjoint.
    pub fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(j, yj)| {
            let lo = self.col_ptr[j];
            let hi = self.col_ptr[j + 1];
            let mut acc = 0.0;
            for p in lo..hi {
                acc += self.val[p] * x[self.row_idx[p] as usize];
            }
            *yj = acc;
        });
    }

    /// Materialized adjoint on the same basis. A column of the adjoint is
    /// complete when no out-of-window vector can map onto it; margin-0
    /// interior vectors qualify, the rest are flagged.
    pub fn adjoint(&self) -> SparseOperator {
        let n = self.dim();
        let boundary: Vec<bool> =
            (0..n as u32).map(|i| !self.basis.is_interior(i, 0)).collect();
        SparseOperator {
            basis: self.basis.clone(),
            col_ptr: self.row_ptr.clone(),
            row_idx: self.col_idx.clone(),
            val: self.val_t.clone(),
            row_ptr: self.col_ptr.clone(),
            col_idx: self.row_idx.clone(),
            val_t: self.val.clone(),
            boundary,
        }
    }

    pub fn scale(mut self, c: f64) -> SparseOperator {
        for v in &mut self.val {
            *v *= c;
        }
        for v in &mut self.val_t {
            *v *= c;
        }
        self
    }

    /// Sorted triplet CSV `(row,col,sign,log_magnitude)` with natural logs.
    pub fn to_triplet_csv(&self) -> String {
        let mut out = String::from("row,col,sign,log_magnitude\n");
        for j in 0..self.dim() as u32 {
            for (i, v) in self.column(j) {
                let sign = if v > 0.0 { 1 } else { -1 };
                out.push_str(&format!("{i},{j},{sign},{:.17e}\n", v.abs().ln()));
            }
        }
        out
    }

    /// JSON header describing the basis and boundary flags.
    pub fn header_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": 1,
            "space": self.basis.space(),
            "ell": self.basis.ell(),
            "cutoff": self.basis.cutoff(),
            "dim": self.dim(),
            "nnz": self.nnz(),
            "boundary_columns": self.boundary.iter().filter(|&&b| b).count(),
        })
    }
}

fn transpose_csc(
    n: usize,
    col_ptr: &[usize],
    row_idx: &[u32],
    val: &[f64],
) -> (Vec<usize>, Vec<u32>, Vec<f64>) {
    let nnz = row_idx.len();
    let mut row_counts = vec![0usize; n + 1];
    for &r in row_idx {
        row_counts[r as usize + 1] += 1;
    }
    for i in 0..n {
        row_counts[i + 1] += row_counts[i];
    }
    let row_ptr = row_counts.clone();
    let mut cursor = row_counts;
    let mut col_idx = vec![0u32; nnz];
    let mut val_t = vec![0.0f64; nnz];
    for j in 0..n {
        for p in col_ptr[j]..col_ptr[j + 1] {
            let r = row_idx[p] as usize;
            col_idx[cursor[r]] = j as u32;
            val_t[cursor[r]] = val[p];
            cursor[r] += 1;
        }
    }
    (row_ptr, col_idx, val_t)
}

fn column_entries(
    basis: &BasisSpec,
    dims: &DimTable,
    q: QParam,
    r: &GtTableau,
    s: &GtTableau,
    len_r: usize,
    len_s: usize,
) -> (Vec<(u32, f64)>, bool) {
    let mut out = Vec::new();
    let mut clipped = false;
    let moves_r: Vec<Move> = enumerate_moves(len_r, r.ell())
        .into_iter()
        .filter(|m| m.apply_raw(r).is_some())
        .collect();
    let moves_s: Vec<Move> = enumerate_moves(len_s, s.ell())
        .into_iter()
        .filter(|m| m.apply_raw(s).is_some())
        .collect();
    for mr in &moves_r {
        let raw_r = mr.apply_raw(r).unwrap();
        let target_r = raw_r.canonicalize();
        let cr = cg_coefficient(r, mr, q).unwrap();
        let kap = kappa(r, &raw_r, dims);
        for ms in &moves_s {
            if ms.steps()[0] != mr.steps()[0] {
                continue;
            }
            let target_s = ms.apply(s).unwrap();
            match basis.index_of(&(target_r.clone(), target_s.clone())) {
                Some(row) => {
                    let cs = cg_coefficient(s, ms, q).unwrap();
                    let v = cr.signed(q).mul(cs.signed(q)).mul(kap).to_f64();
                    out.push((row, v));
                }
                None => {
                    debug_assert!(target_r.r11() > basis.cutoff());
                    clipped = true;
                }
            }
        }
    }
    (out, clipped)
}

/// Left multiplication by the fundamental matrix entry `u_{ij}` on the group
/// basis: the column of `e^lambda_{rs}` holds
/// `C_q(i,r,M(r)) C_q(j,s,M'(s)) kappa(r,M(r))` at the move-image rows with
/// matching target top row.
pub fn build_pi_u(
    i: usize,
    j: usize,
    q: QParam,
    basis: &Arc<BasisSpec>,
    dims: &DimTable,
) -> Result<SparseOperator> {
    if basis.space() != Space::Group {
        return Err(Error::Argument("build_pi_u requires a group basis".into()));
    }
    let ell = basis.ell();
    if i == 0 || i > ell + 1 || j == 0 || j > ell + 1 {
        return Err(Error::Argument(format!("matrix entry ({i},{j}) out of range")));
    }
    let cols: Vec<(Vec<(u32, f64)>, bool)> = (0..basis.len() as u32)
        .into_par_iter()
        .map(|c| {
            let (r, s) = basis.key(c);
            column_entries(basis, dims, q, r, s, i, j)
        })
        .collect();
    let (columns, boundary): (Vec<_>, Vec<_>) = cols.into_iter().unzip();
    Ok(SparseOperator::from_columns(basis.clone(), columns, boundary))
}

/// Restriction of left multiplication by `u_{1,j}` to the sphere basis. The
/// row move can only raise `(n,k)` to `(n+1,k)` or lower it to `(n,k-1)`, so
/// the span of the sphere basis is preserved exactly.
pub fn build_pi_u_sphere(
    j: usize,
    q: QParam,
    basis: &Arc<BasisSpec>,
    dims: &DimTable,
) -> Result<SparseOperator> {
    if basis.space() != Space::Sphere {
        return Err(Error::Argument("sphere restriction requires a sphere basis".into()));
    }
    let ell = basis.ell();
    if j == 0 || j > ell + 1 {
        return Err(Error::Argument(format!("generator index {j} out of range")));
    }
    let cols: Vec<(Vec<(u32, f64)>, bool)> = (0..basis.len() as u32)
        .into_par_iter()
        .map(|c| {
            let (r, s) = basis.key(c);
            column_entries(basis, dims, q, r, s, 1, j)
        })
        .collect();
    let (columns, boundary): (Vec<_>, Vec<_>) = cols.into_iter().unzip();
    Ok(SparseOperator::from_columns(basis.clone(), columns, boundary))
}

/// Sphere generator `pi(z_i) = q^{-i+1} pi(u_{1,i})^*` on the sphere basis.
pub fn build_pi_z(
    i: usize,
    q: QParam,
    basis: &Arc<BasisSpec>,
    dims: &DimTable,
) -> Result<SparseOperator> {
    if basis.space() != Space::Sphere {
        return Err(Error::Argument("build_pi_z requires a sphere basis".into()));
    }
    let u = build_pi_u_sphere(i, q, basis, dims)?;
    Ok(u.adjoint().scale(q.value().powi(1 - i as i32)))
}

/// One named relation residual.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualEntry {
    pub relation: String,
    pub max_residual: f64,
}

/// Max relation residuals over interior vectors.
#[derive(Debug, Serialize)]
pub struct ResidualReport {
    pub space: Space,
    pub ell: usize,
    pub q: f64,
    pub cutoff: i32,
    pub margin: i32,
    pub interior_count: usize,
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.max_residual).fold(0.0, f64::max)
    }
}

pub(crate) enum Term<'a> {
    /// coefficient * product of operators applied right to left
    Prod(f64, Vec<&'a SparseOperator>),
    /// coefficient * identity
    Id(f64),
}

pub(crate) fn residual_over_interior(dim: usize, interior: &[u32], terms: &[Term]) -> f64 {
    interior
        .par_iter()
        .map(|&v| {
            let mut x = vec![0.0f64; dim];
            let mut acc = vec![0.0f64; dim];
            let mut tmp = vec![0.0f64; dim];
            for term in terms {
                match term {
                    Term::Id(c) => acc[v as usize] += c,
                    Term::Prod(c, ops) => {
                        x.fill(0.0);
                        x[v as usize] = 1.0;
                        for op in ops.iter().rev() {
                            op.apply(&x, &mut tmp);
                            std::mem::swap(&mut x, &mut tmp);
                        }
                        for (a, b) in acc.iter_mut().zip(x.iter()) {
                            *a += c * b;
                        }
                    }
                }
            }
            acc.iter().map(|a| a * a).sum::<f64>().sqrt()
        })
        .reduce(|| 0.0, f64::max)
}

/// Verifies the defining relations on interior vectors: the displayed sphere
/// relations for `z_i = q^{-i+1} u_{1,i}^*`, or column unitarity of the
/// fundamental corepresentation for the group.
pub fn relation_residuals(
    q: QParam,
    basis: &Arc<BasisSpec>,
    dims: &DimTable,
    margin: i32,
) -> Result<ResidualReport> {
    if margin < 1 {
        return Err(Error::Argument("margin must be at least 1".into()));
    }
    let interior = basis.interior_indices(margin)?;
    let ell = basis.ell();
    let dim = basis.len();
    let qv = q.value();
    let mut entries = Vec::new();

    match basis.space() {
        Space::Sphere => {
            let z: Vec<SparseOperator> =
                (1..=ell + 1).map(|i| build_pi_z(i, q, basis, dims)).collect::<Result<_>>()?;
            let zs: Vec<SparseOperator> = z.iter().map(|op| op.adjoint()).collect();
            // z_i z_j = q z_j z_i for j < i
            let mut worst = 0.0f64;
            for i in 0..=ell {
                for j in 0..i {
                    let terms = [
                        Term::Prod(1.0, vec![&z[i], &z[j]]),
                        Term::Prod(-qv, vec![&z[j], &z[i]]),
                    ];
                    worst = worst.max(residual_over_interior(dim, &interior, &terms));
                }
            }
            entries.push(ResidualEntry { relation: "z_i z_j = q z_j z_i".into(), max_residual: worst });
            // z_i z_j* = q z_j* z_i for i != j
            let mut worst = 0.0f64;
            for i in 0..=ell {
                for j in 0..=ell {
                    if i == j {
                        continue;
                    }
                    let terms = [
                        Term::Prod(1.0, vec![&z[i], &zs[j]]),
                        Term::Prod(-qv, vec![&zs[j], &z[i]]),
                    ];
                    worst = worst.max(residual_over_interior(dim, &interior, &terms));
                }
            }
            entries.push(ResidualEntry {
                relation: "z_i z_j* = q z_j* z_i".into(),
                max_residual: worst,
            });
            // z_i z_i* - z_i* z_i + (1-q^2) sum_{k>i} z_k z_k* = 0
            let mut worst = 0.0f64;
            for i in 0..=ell {
                let mut terms = vec![
                    Term::Prod(1.0, vec![&z[i], &zs[i]]),
                    Term::Prod(-1.0, vec![&zs[i], &z[i]]),
                ];
                for k in (i + 1)..=ell {
                    terms.push(Term::Prod(1.0 - qv * qv, vec![&z[k], &zs[k]]));
                }
                worst = worst.max(residual_over_interior(dim, &interior, &terms));
            }
            entries.push(ResidualEntry {
                relation: "z_i z_i* - z_i* z_i + (1-q^2) sum_{k>i} z_k z_k* = 0".into(),
                max_residual: worst,
            });
            // sum_i z_i z_i* = 1
            let mut terms = vec![Term::Id(-1.0)];
            for i in 0..=ell {
                terms.push(Term::Prod(1.0, vec![&z[i], &zs[i]]));
            }
            entries.push(ResidualEntry {
                relation: "sum_i z_i z_i* = 1".into(),
                max_residual: residual_over_interior(dim, &interior, &terms),
            });
        }
        Space::Group => {
            let mut ops: HashMap<(usize, usize), SparseOperator> = HashMap::new();
            for k in 1..=ell + 1 {
                for i in 1..=ell + 1 {
                    ops.insert((k, i), build_pi_u(k, i, q, basis, dims)?);
                }
            }
            let adj: HashMap<(usize, usize), SparseOperator> =
                ops.iter().map(|(&k, v)| (k, v.adjoint())).collect();
            let mut worst = 0.0f64;
            for i in 1..=ell + 1 {
                for j in 1..=ell + 1 {
                    let mut terms = Vec::new();
                    if i == j {
                        terms.push(Term::Id(-1.0));
                    }
                    for k in 1..=ell + 1 {
                        terms.push(Term::Prod(1.0, vec![&adj[&(k, i)], &ops[&(k, j)]]));
                    }
                    worst = worst.max(residual_over_interior(dim, &interior, &terms));
                }
            }
            entries.push(ResidualEntry {
                relation: "sum_k u_ki* u_kj = delta_ij".into(),
                max_residual: worst,
            });
        }
    }

    Ok(ResidualReport {
        space: basis.space(),
        ell,
        q: qv,
        cutoff: basis.cutoff(),
        margin,
        interior_count: interior.len(),
        entries,
    })
}

/// Exact dimension of a sphere sector `(n, k)`.
pub fn sphere_sector_dim(n: i32, k: i32, ell: usize) -> u128 {
    sphere_top_row(n, k, ell).dim()
}

/// The `(n, k)` label of a sphere basis key.
pub fn key_sector(basis: &BasisSpec, i: u32) -> (i32, i32) {
    sphere_nk(&basis.key(i).0)
}

/// Dimension table sized for a basis (one row of headroom for move targets).
pub fn dim_table_for(basis: &BasisSpec, q: QParam) -> DimTable {
    DimTable::new(basis.ell(), basis.cutoff() + 1, q)
}

/// The tableau with ones in the first `i` rows of column 1: the basis label
/// `i` of the fundamental representation.
pub fn fundamental_pattern(i: usize, ell: usize) -> GtTableau {
    let mut rows: Vec<Vec<i32>> = (0..=ell).map(|a| vec![0; ell + 1 - a]).collect();
    for row in rows.iter_mut().take(i) {
        row[0] = 1;
    }
    GtTableau::new(rows).unwrap()
}

/// Closed-form L2 norm `d_1^{-1/2} q^{-psi(pattern_i)}` of the matrix entry
/// `u_{ij}`.
pub fn fundamental_entry_norm(i: usize, ell: usize, q: QParam) -> f64 {
    let one_box = YoungDiagram::new({
        let mut p = vec![0; ell + 1];
        p[0] = 1;
        p
    })
    .unwrap();
    let d = crate::qarith::weyl_q_dimension(&one_box, q);
    let psi2 = fundamental_pattern(i, ell).psi2();
    (-0.5 * d.ln_mag() - psi2 as f64 / 2.0 * q.ln()).exp()
}
