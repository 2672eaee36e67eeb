//! Wigner rotation matrices and exact Clebsch-Gordan coefficients.
//!
//! Matrix rows and columns run over `m` descending, `+s` first, everywhere in
//! the crate.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::numerics::{factorial, factorial_f64, ComplexF, HalfInt, SignedSqrtRational};
use crate::su2::SU2Element;

/// `D^s(g)` as a dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerD {
    pub s: HalfInt,
    dim: usize,
    entries: Vec<ComplexF>,
}

impl WignerD {
    pub fn identity(s: HalfInt) -> Self {
        let dim = s.multiplicity();
        let mut entries = vec![ComplexF::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ComplexF::new(1.0, 0.0);
        }
        WignerD { s, dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry by row/column index.
    pub fn at(&self, row: usize, col: usize) -> ComplexF {
        self.entries[row * self.dim + col]
    }

    /// Entry `D_{m' m}`; `None` if either projection is out of range.
    pub fn get(&self, m_row: HalfInt, m_col: HalfInt) -> Option<ComplexF> {
        Some(self.at(self.s.index_of(m_row)?, self.s.index_of(m_col)?))
    }

    pub fn entries(&self) -> &[ComplexF] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<ComplexF>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, col: usize) -> Vec<ComplexF> {
        (0..self.dim).map(|r| self.at(r, col)).collect()
    }

    pub fn matmul(&self, o: &WignerD) -> WignerD {
        assert_eq!(self.s, o.s, "spin mismatch in D-matrix product");
        let n = self.dim;
        let mut entries = vec![ComplexF::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                for j in 0..n {
                    entries[i * n + j] += a * o.at(k, j);
                }
            }
        }
        WignerD { s: self.s, dim: n, entries }
    }

    pub fn adjoint(&self) -> WignerD {
        let n = self.dim;
        let mut entries = vec![ComplexF::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.at(i, j).conj();
            }
        }
        WignerD { s: self.s, dim: n, entries }
    }

    pub fn apply(&self, v: &[ComplexF]) -> Vec<ComplexF> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.at(i, j) * v[j]).sum()).collect()
    }

    pub fn scaled(&self, c: ComplexF) -> WignerD {
        WignerD { s: self.s, dim: self.dim, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    /// Largest entrywise modulus of `self - o`.
    pub fn max_diff(&self, o: &WignerD) -> f64 {
        crate::numerics::max_abs_diff(&self.entries, &o.entries)
    }
}

fn binomial_f64(n: u32, k: u32) -> f64 {
    factorial_f64(n) / (factorial_f64(k) * factorial_f64(n - k))
}

/// `d^s_{m'm}(β)` by the Wigner factorial sum.
pub fn little_d(s: HalfInt, beta: f64) -> Vec<Vec<f64>> {
    let ms: Vec<HalfInt> = s.projections().collect();
    let (c, sn) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let tj = s.twice();
    ms.iter()
        .map(|&mp| {
            ms.iter()
                .map(|&m| {
                    // all counters below are integers: j±m, j±m'
                    let jpm = ((tj + m.twice()) / 2) as i64;
                    let jmm = ((tj - m.twice()) / 2) as i64;
                    let jpmp = ((tj + mp.twice()) / 2) as i64;
                    let jmmp = ((tj - mp.twice()) / 2) as i64;
                    let dm = (mp.twice() - m.twice()) / 2; // m' - m
                    let dm = dm as i64;
                    let pre = (factorial_f64(jpmp as u32)
                        * factorial_f64(jmmp as u32)
                        * factorial_f64(jpm as u32)
                        * factorial_f64(jmm as u32))
                    .sqrt();
                    let kmin = 0.max(-dm);
                    let kmax = jpm.min(jmmp);
                    let mut sum = 0.0;
                    for k in kmin..=kmax {
                        let den = factorial_f64((jpm - k) as u32)
                            * factorial_f64(k as u32)
                            * factorial_f64((jmmp - k) as u32)
                            * factorial_f64((k + dm) as u32);
                        let sign = if (k + dm).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                        let pc = (tj as i64 - dm - 2 * k) as i32;
                        let ps = (2 * k + dm) as i32;
                        sum += sign * c.powi(pc) * sn.powi(ps) / den;
                    }
                    pre * sum
                })
                .collect()
        })
        .collect()
}

/// `D^s(g)` as the `2s`-th symmetric power of the spin-1/2 matrix of `g`.
/// Works directly from the quaternion so `D^s(-g) = (-1)^{2s} D^s(g)` holds
/// identically, with no Euler-angle extraction.
pub fn big_d(s: HalfInt, g: SU2Element) -> WignerD {
    let (a, b) = g.cayley_klein();
    // columns are the images of ξ = |+1/2> and η = |-1/2>
    let (u00, u01, u10, u11) = (a, b, -b.conj(), a.conj());
    let tj = s.twice();
    let dim = s.multiplicity();
    let mut entries = vec![ComplexF::new(0.0, 0.0); dim * dim];
    let norm = |twice_m: i32| -> f64 {
        let p = ((tj + twice_m) / 2) as u32;
        let q = ((tj - twice_m) / 2) as u32;
        (factorial_f64(p) * factorial_f64(q)).sqrt()
    };
    for (col, m) in s.projections().enumerate() {
        let jp = ((tj + m.twice()) / 2) as u32;
        let jm = ((tj - m.twice()) / 2) as u32;
        // (u00 ξ + u10 η)^{jp} (u01 ξ + u11 η)^{jm}
        for p in 0..=jp {
            let left = u00.powu(p) * u10.powu(jp - p) * binomial_f64(jp, p);
            for q in 0..=jm {
                let right = u01.powu(q) * u11.powu(jm - q) * binomial_f64(jm, q);
                // ξ^{j+m'} η^{j-m'} lands in the row of m' = (p + q) - j
                let row_idx = (tj - (p + q) as i32) as usize;
                entries[row_idx * dim + col] += left * right;
            }
        }
        let nm = norm(m.twice());
        for (row, mp) in s.projections().enumerate() {
            entries[row * dim + col] *= norm(mp.twice()) / nm;
        }
    }
    WignerD { s, dim, entries }
}

/// An exact Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>`.
#[derive(Clone, Debug, PartialEq)]
pub struct CGValue {
    pub j1: HalfInt,
    pub j2: HalfInt,
    pub j: HalfInt,
    pub m1: HalfInt,
    pub m2: HalfInt,
    pub m: HalfInt,
    pub value: SignedSqrtRational,
}

impl CGValue {
    pub fn to_f64(&self) -> f64 {
        // radicands of CG coefficients are at most 1
        self.value.to_f64().expect("CG radicand is bounded by 1")
    }
}

fn is_int(x: i32) -> bool {
    x.rem_euclid(2) == 0
}

fn fact_int(twice: i32) -> BigUint {
    factorial((twice / 2) as u32)
}

fn selection_ok(j1: HalfInt, j2: HalfInt, j: HalfInt, m1: HalfInt, m2: HalfInt, m: HalfInt) -> bool {
    let (tj1, tj2, tj) = (j1.twice(), j2.twice(), j.twice());
    let (tm1, tm2, tm) = (m1.twice(), m2.twice(), m.twice());
    tj1 >= 0
        && tj2 >= 0
        && tj >= 0
        && tm1 + tm2 == tm
        && tm1.abs() <= tj1
        && tm2.abs() <= tj2
        && tm.abs() <= tj
        && is_int(tj1 + tm1)
        && is_int(tj2 + tm2)
        && is_int(tj + tm)
        && is_int(tj1 + tj2 + tj)
        && (tj1 - tj2).abs() <= tj
        && tj <= tj1 + tj2
}

/// `<j1 m1; j2 m2 | J M>` by Racah's single-sum formula in exact arithmetic.
/// Any input violating the selection rules gives an exact zero.
pub fn clebsch_gordan(j1: HalfInt, j2: HalfInt, j: HalfInt, m1: HalfInt, m2: HalfInt, m: HalfInt) -> CGValue {
    let zero = CGValue { j1, j2, j, m1, m2, m, value: SignedSqrtRational::zero() };
    if !selection_ok(j1, j2, j, m1, m2, m) {
        return zero;
    }
    let (tj1, tj2, tj) = (j1.twice(), j2.twice(), j.twice());
    let (tm1, tm2, tm) = (m1.twice(), m2.twice(), m.twice());

    let big = |u: BigUint| BigInt::from(u);
    let num = big(fact_int(tj + tj1 - tj2) * fact_int(tj - tj1 + tj2) * fact_int(tj1 + tj2 - tj))
        * BigInt::from(tj + 1)
        * big(fact_int(tj + tm)
            * fact_int(tj - tm)
            * fact_int(tj1 - tm1)
            * fact_int(tj1 + tm1)
            * fact_int(tj2 - tm2)
            * fact_int(tj2 + tm2));
    let den = big(fact_int(tj1 + tj2 + tj + 2));
    let a = BigRational::new(num, den);

    // k runs over integers keeping every factorial argument nonnegative
    let h = |t: i32| t / 2;
    let kmin = 0.max(h(tj2 - tj - tm1)).max(h(tj1 - tj + tm2));
    let kmax = h(tj1 + tj2 - tj).min(h(tj1 - tm1)).min(h(tj2 + tm2));
    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let d = factorial(k as u32)
            * fact_int(tj1 + tj2 - tj - 2 * k)
            * fact_int(tj1 - tm1 - 2 * k)
            * fact_int(tj2 + tm2 - 2 * k)
            * fact_int(tj - tj2 + tm1 + 2 * k)
            * fact_int(tj - tj1 - tm2 + 2 * k);
        let term = BigRational::new(BigInt::from(1), BigInt::from(d));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return zero;
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    let radicand = a * &sum * &sum;
    CGValue { value: SignedSqrtRational::new(sign, radicand), ..zero }
}

/// `(-1)^{S-2s}`: the sign relating `C^{ssS}_{m_a m_b M}` to `C^{ssS}_{m_b m_a M}`.
pub fn cg_exchange_sign(s: HalfInt, total: HalfInt) -> i32 {
    let exponent = total.twice() / 2 - s.twice();
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
