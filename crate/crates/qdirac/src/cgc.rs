//! Quantum Clebsch-Gordan coefficients for the tensor product of the
//! fundamental representation with an arbitrary one, expressed in the
//! Gelfand-Tsetlin basis: squared bracket factors, the integer exponent
//! `C(i, r, M)`, the normalization factor `kappa`, and the brute-force
//! q-dimension sum used as an oracle for the Weyl product formula.

use std::collections::HashMap;

use crate::qarith::{q_int, weyl_q_dimension, QParam, Scalar};
use crate::tableaux::{enumerate_tableaux, GtTableau, Move, YoungDiagram};
use crate::{Error, Result};

/// Which squared bracket of the level factorization to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketKind {
    /// Both rows gain a box (indices `j` in the upper row, `k` in the lower).
    Linking,
    /// Only the upper row gains a box (index `j`).
    Terminal,
}

/// A Clebsch-Gordan value split as `sign * prefactor * q^exponent`, with the
/// prefactor bounded between fixed positive constants.
#[derive(Clone, Copy, Debug)]
pub struct CgValue {
    pub sign: i8,
    pub exponent: i64,
    /// Natural log of the prefactor `P = |C| q^{-exponent}`.
    pub prefactor_ln: f64,
}

impl CgValue {
    pub fn magnitude(&self, q: QParam) -> Scalar {
        Scalar::new(self.sign.abs(), self.prefactor_ln + self.exponent as f64 * q.ln())
    }

    pub fn signed(&self, q: QParam) -> Scalar {
        Scalar::new(self.sign, self.prefactor_ln + self.exponent as f64 * q.ln())
    }

    pub fn to_f64(&self, q: QParam) -> f64 {
        self.signed(q).to_f64()
    }
}

/// The integer exponent `C(i, r, M)`: a sum of `H` entries over the index
/// ranges swept by consecutive move positions, plus twice the enclosed `V`
/// entries, plus the tail of row `i`. Empty sums are zero.
///
/// Requires `M(r)` to be a valid tableau.
pub fn cg_exponent(r: &GtTableau, mv: &Move) -> Result<i64> {
    if mv.apply_raw(r).is_none() {
        return Err(Error::Argument(format!("move {mv} invalid on {r}")));
    }
    let ell = r.ell();
    let i = mv.len();
    let m = mv.steps();
    let mut total: i64 = 0;
    for a in 1..i {
        let (ma, ma1) = (m[a - 1] as usize, m[a] as usize);
        let (lo, hi) = (ma.min(ma1), ma.max(ma1));
        for b in lo..hi {
            total += r.h(a, b) as i64;
        }
        if ma > ma1 {
            // vertical differences V_{ab} = r_{ab} - r_{a+1,b} strictly between
            for b in (ma1 + 1)..ma {
                total += 2 * (r.entry(a, b) - r.entry(a + 1, b)) as i64;
            }
        }
    }
    let mi = m[i - 1] as usize;
    for b in mi..(ell + 2 - i) {
        total += r.h(i, b) as i64;
    }
    Ok(total)
}

/// One squared bracket factor, exactly as displayed: a power of `q` times a
/// product and quotient of q-numbers of row differences. `upper` is row `a`
/// of the tableau, `lower` row `a+1` (empty for the last terminal level).
/// Indices `j`, `k` are 1-based box positions; `k` is ignored for
/// [`BracketKind::Terminal`].
pub fn bracket_square(
    kind: BracketKind,
    upper: &[i32],
    lower: &[i32],
    j: usize,
    k: usize,
    q: QParam,
) -> Result<Scalar> {
    let lu = upper.len();
    if j == 0 || j > lu {
        return Err(Error::Argument(format!("box index j={j} out of range")));
    }
    let mut acc = match kind {
        BracketKind::Linking => {
            if k == 0 || k > lower.len() {
                return Err(Error::Argument(format!("box index k={k} out of range")));
            }
            let e = -upper[j - 1] + lower[k - 1] - k as i32 + j as i32;
            let mut acc = Scalar::q_pow(e as i64, q);
            for i in 1..=lu {
                if i == j {
                    continue;
                }
                let num = q_int((upper[i - 1] - lower[k - 1]) as i64 - i as i64 + k as i64, q);
                let den = q_int((upper[i - 1] - upper[j - 1]) as i64 - i as i64 + j as i64, q);
                acc = div_checked(acc.mul(num), den)?;
            }
            for i in 1..=lower.len() {
                if i == k {
                    continue;
                }
                let num = q_int((lower[i - 1] - upper[j - 1]) as i64 - i as i64 + j as i64 - 1, q);
                let den = q_int((lower[i - 1] - lower[k - 1]) as i64 - i as i64 + k as i64 - 1, q);
                acc = div_checked(acc.mul(num), den)?;
            }
            acc
        }
        BracketKind::Terminal => {
            let sl: i64 = lower.iter().map(|&x| x as i64).sum();
            let su: i64 = upper
                .iter()
                .enumerate()
                .filter(|(i, _)| i + 1 != j)
                .map(|(_, &x)| x as i64)
                .sum();
            let e = 1 - j as i64 + sl - su;
            let mut acc = Scalar::q_pow(e, q);
            for i in 1..=lower.len() {
                let num = q_int((lower[i - 1] - upper[j - 1]) as i64 - i as i64 + j as i64 - 1, q);
                acc = acc.mul(num);
            }
            for i in 1..=lu {
                if i == j {
                    continue;
                }
                let den = q_int((upper[i - 1] - upper[j - 1]) as i64 - i as i64 + j as i64, q);
                acc = div_checked(acc, den)?;
            }
            acc
        }
    };
    // squares of real brackets; a negative product means bad input
    if acc.sign() < 0 {
        return Err(Error::Invalid(
            "squared bracket evaluated negative (non-interlacing input)".into(),
        ));
    }
    if acc.is_zero() {
        acc = Scalar::ZERO;
    }
    Ok(acc)
}

fn div_checked(num: Scalar, den: Scalar) -> Result<Scalar> {
    if den.is_zero() {
        return Err(Error::Argument("division by [0]_q (non-interlacing input)".into()));
    }
    num.div(den)
}

/// Full Clebsch-Gordan coefficient `C_q(i, r, M(r))` for a move `M` of
/// length `i`: the product of the level brackets, with the sign convention
/// `(-1)^{m_i - 1}` on the terminal box position. The convention is
/// calibrated so that the rank-one change-of-basis matrices come out
/// orthogonal (checked in tests for `l = 1`).
pub fn cg_coefficient(r: &GtTableau, mv: &Move, q: QParam) -> Result<CgValue> {
    let i = mv.len();
    if i == 0 || i > r.ell() + 1 {
        return Err(Error::Argument(format!("move length {i} out of range")));
    }
    if mv.apply_raw(r).is_none() {
        return Err(Error::Argument(format!("move {mv} invalid on {r}")));
    }
    let m = mv.steps();
    let mut ln_sq = 0.0f64;
    for a in 1..i {
        let sq = bracket_square(
            BracketKind::Linking,
            r.row(a),
            r.row(a + 1),
            m[a - 1] as usize,
            m[a] as usize,
            q,
        )?;
        debug_assert!(!sq.is_zero(), "linking bracket vanished on a valid move");
        ln_sq += sq.ln_mag();
    }
    let empty: [i32; 0] = [];
    let lower: &[i32] = if i == r.ell() + 1 { &empty } else { r.row(i + 1) };
    let sq = bracket_square(BracketKind::Terminal, r.row(i), lower, m[i - 1] as usize, 0, q)?;
    debug_assert!(!sq.is_zero(), "terminal bracket vanished on a valid move");
    ln_sq += sq.ln_mag();

    let sign = if (m[i - 1] - 1) % 2 == 0 { 1 } else { -1 };
    let exponent = cg_exponent(r, mv)?;
    Ok(CgValue { sign, exponent, prefactor_ln: 0.5 * ln_sq - exponent as f64 * q.ln() })
}

/// Precomputed q-dimensions for every diagram that can occur in a truncated
/// run, keyed by canonical parts. Immutable after construction, so it can be
/// shared across assembly threads.
pub struct DimTable {
    q: QParam,
    map: HashMap<Vec<i32>, Scalar>,
}

impl DimTable {
    /// Dimensions for all canonical diagrams with first part `<= max`.
    pub fn new(ell: usize, max: i32, q: QParam) -> Self {
        let mut map = HashMap::new();
        for lam in crate::tableaux::young_diagrams(ell, max) {
            map.insert(lam.parts().to_vec(), weyl_q_dimension(&lam, q));
        }
        DimTable { q, map }
    }

    pub fn q(&self) -> QParam {
        self.q
    }

    pub fn get(&self, lambda: &YoungDiagram) -> Scalar {
        let canon = lambda.canonicalize();
        match self.map.get(canon.parts()) {
            Some(&d) => d,
            None => weyl_q_dimension(&canon, self.q),
        }
    }
}

/// Haar-norm ratio `kappa(r, m) = d_lambda^{1/2} d_mu^{-1/2} q^{psi(r)-psi(m)}`
/// for `m` a move image of `r`.
pub fn kappa(r: &GtTableau, m: &GtTableau, dims: &DimTable) -> Scalar {
    let q = dims.q();
    let dl = dims.get(&r.top());
    let dm = dims.get(&m.top());
    let ln = 0.5 * (dl.ln_mag() - dm.ln_mag()) + (r.psi2() - m.psi2()) as f64 / 2.0 * q.ln();
    Scalar::new(1, ln)
}

/// Brute-force q-dimension: `sum over tableaux r with top row lambda of
/// q^{2 psi(r)}`. Independent oracle for `qarith::weyl_q_dimension`.
pub fn q_dim_sum(lambda: &YoungDiagram, q: QParam) -> Scalar {
    let terms: Vec<Scalar> =
        enumerate_tableaux(lambda).iter().map(|r| Scalar::q_pow(r.psi2(), q)).collect();
    Scalar::sum(&terms)
}

/// All valid moves of length `len` on `r`, paired with their coefficients.
pub fn valid_moves_with_coefficients(
    r: &GtTableau,
    len: usize,
    q: QParam,
) -> Vec<(Move, CgValue)> {
    crate::tableaux::enumerate_moves(len, r.ell())
        .into_iter()
        .filter(|mv| mv.apply_raw(r).is_some())
        .map(|mv| {
            let c = cg_coefficient(r, &mv, q).expect("valid move has a coefficient");
            (mv, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::{enumerate_moves, young_diagrams};
    use approx::assert_relative_eq;

    fn q(x: f64) -> QParam {
        QParam::new(x).unwrap()
    }

    fn t(s: &str) -> GtTableau {
        s.parse().unwrap()
    }

    #[test]
    fn exponent_examples() {
        // i = 1, M = (1) on a sphere tableau picks up the whole first H row = k
        for ell in 1..=3 {
            let r = GtTableau::sphere(2, 3, ell);
            let m = Move::m_family(1, 1, ell).unwrap();
            assert_eq!(cg_exponent(&r, &m).unwrap(), 3);
            // i = 1, M = (l+1) has an empty sum
            let m = Move::m_family(ell + 1, 1, ell).unwrap();
            assert_eq!(cg_exponent(&r, &m).unwrap(), 0);
            // full column raise i = l+1, M = N_10
            let n10 = Move::n_family(1, 0, ell).unwrap();
            assert_eq!(cg_exponent(&r, &n10).unwrap(), 0);
        }
    }

    #[test]
    fn column_raises_always_have_zero_exponent() {
        for lam in young_diagrams(2, 3) {
            for r in enumerate_tableaux(&lam) {
                for j in 1..=3 {
                    let mv = Move::n_family(j, 0, 2).unwrap();
                    if mv.apply_raw(&r).is_some() {
                        assert_eq!(cg_exponent(&r, &mv).unwrap(), 0, "N_{j}0 on {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_column_coefficients_are_one() {
        // on the zero tableau the unique valid move of each length is the
        // truncated column raise, with coefficient exactly 1
        for ell in 1..=3 {
            let zero = GtTableau::zero(ell);
            for i in 1..=(ell + 1) {
                let valid: Vec<_> = enumerate_moves(i, ell)
                    .into_iter()
                    .filter(|m| m.apply_raw(&zero).is_some())
                    .collect();
                assert_eq!(valid.len(), 1);
                let c = cg_coefficient(&zero, &valid[0], q(0.5)).unwrap();
                assert_eq!(c.sign, 1);
                assert_eq!(c.exponent, 0);
                assert_relative_eq!(c.to_f64(q(0.5)), 1.0, max_relative = 1e-12);
            }
        }
    }

    // frozen 4x4 change-of-basis block for l = 1, lambda = (1,0), q = 1/2,
    // computed by direct evaluation of the two displayed squared brackets
    #[test]
    fn su2_fundamental_block() {
        let h = q(0.5);
        let r0 = t("[[1,0],[0]]");
        let r1 = t("[[1,0],[1]]");
        let m1 = Move::new(vec![1]);
        let m2 = Move::new(vec![2]);
        let m11 = Move::new(vec![1, 1]);
        let m21 = Move::new(vec![2, 1]);

        assert_relative_eq!(cg_coefficient(&r0, &m1, h).unwrap().to_f64(h), 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            cg_coefficient(&r1, &m1, h).unwrap().to_f64(h),
            0.2f64.sqrt(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            cg_coefficient(&r0, &m11, h).unwrap().to_f64(h),
            0.8f64.sqrt(),
            max_relative = 1e-12
        );
        // terminal box at position 2 carries the negative sign
        assert_relative_eq!(
            cg_coefficient(&r1, &m2, h).unwrap().to_f64(h),
            -(0.8f64.sqrt()),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            cg_coefficient(&r0, &m21, h).unwrap().to_f64(h),
            0.2f64.sqrt(),
            max_relative = 1e-12
        );
        assert_relative_eq!(cg_coefficient(&r1, &m11, h).unwrap().to_f64(h), 1.0, max_relative = 1e-12);
        // invalid moves are rejected
        assert!(cg_coefficient(&r0, &m2, h).is_err());
        assert!(cg_coefficient(&r1, &m21, h).is_err());
    }

    #[test]
    fn kappa_elementary_value() {
        // l = 1, r = zero, m = M_11(zero): d_lambda = 1, d_mu = [2]_q,
        // psi(r) - psi(m) = 1/2, so kappa = sqrt(q / [2]_q) = sqrt(0.2)
        let h = q(0.5);
        let dims = DimTable::new(1, 2, h);
        let zero = GtTableau::zero(1);
        let m = Move::m_family(1, 1, 1).unwrap().apply_raw(&zero).unwrap();
        let k = kappa(&zero, &m, &dims);
        assert_relative_eq!(k.to_f64(), 0.2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn q_dim_sum_matches_weyl_product() {
        for ell in 1..=3usize {
            for qv in [0.3, 0.5, 0.8] {
                let h = q(qv);
                for lam in young_diagrams(ell, 3) {
                    let a = q_dim_sum(&lam, h);
                    let b = weyl_q_dimension(&lam, h);
                    assert!(
                        (a.ln_mag() - b.ln_mag()).abs() < 1e-10,
                        "dimension mismatch at {lam}, q={qv}"
                    );
                }
            }
        }
    }

    #[test]
    fn sphere_coefficient_asymptotics() {
        // C_q(1, r^{0,k}, M_11) = q^k (1 + o(q)); prefactor tends to 1
        let ell = 2;
        let r = GtTableau::sphere(0, 3, ell);
        let m11 = Move::m_family(1, 1, ell).unwrap();
        let mtop = Move::m_family(ell + 1, 1, ell).unwrap();
        let mut prev = f64::INFINITY;
        for qv in [0.2, 0.1, 0.05] {
            let h = q(qv);
            let c = cg_coefficient(&r, &m11, h).unwrap();
            assert_eq!(c.exponent, 3);
            let dev = (c.prefactor_ln.exp() - 1.0).abs();
            assert!(dev < prev && dev < 0.2, "prefactor drift {dev} at q={qv}");
            prev = dev;
            // C_q(1, r^{0,k}, M_{l+1,1}) = 1 + o(q)
            let c2 = cg_coefficient(&r, &mtop, h).unwrap();
            assert_eq!(c2.exponent, 0);
            assert!((c2.to_f64(h) - 1.0).abs() < 0.2);
        }
    }

    #[test]
    fn sphere_kappa_asymptotics() {
        // kappa(r^{0,k}, M_11 r^{0,k}) = q^l (1 + o(q)),
        // kappa(r^{0,k}, M_{l+1,1} r^{0,k}) = 1 + o(q)
        let ell = 2;
        let r = GtTableau::sphere(0, 2, ell);
        let up = Move::m_family(1, 1, ell).unwrap().apply_raw(&r).unwrap();
        let down = Move::m_family(ell + 1, 1, ell).unwrap().apply_raw(&r).unwrap();
        for qv in [0.1, 0.05] {
            let h = q(qv);
            let dims = DimTable::new(ell, 4, h);
            let ku = kappa(&r, &up, &dims).to_f64();
            assert!((ku / qv.powi(ell as i32) - 1.0).abs() < 0.2, "kappa up {ku} at q={qv}");
            let kd = kappa(&r, &down, &dims).to_f64();
            assert!((kd - 1.0).abs() < 0.2, "kappa down {kd} at q={qv}");
        }
    }
}
