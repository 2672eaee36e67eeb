//! Coupled spins, plane-wave helicity states of a pair in its centre-of-mass
//! frame, their partial-wave projections, and LS states of identical
//! particles.

use std::f64::consts::PI;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{parallel_frames_with, FrameOptions};
use crate::numerics::{pairwise_sum, unit_phase, ComplexF, HalfInt, SignedSqrtRational};
use crate::quadrature::{sphere_grid, SphereNode};
use crate::states::{canonical_to_helicity, check_projection, lab_ket, BaseKind, ParticleDesc};
use crate::su2::{axis_angle_unchecked, compose, rot_y, rot_z, rotate, SU2Element, Vec3};
use crate::twoparticle::{
    ordered_product, perpendicular, symmetrized_pair, tensor, vec_norm, Builder, OrderedPairDesc, PairState,
};
use crate::wigner::{big_d, clebsch_gordan};

fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    c.twice() >= (a - b).abs().twice() && c.twice() <= (a + b).twice() && (a + b + c).is_integer()
}

fn triangle_err(a: HalfInt, b: HalfInt, c: HalfInt) -> Error {
    Error::TriangleViolation(format!("{a}, {b}, {c}"))
}

/// Two equal spins coupled to total `S, M` in both slot orders.
#[derive(Clone, Debug)]
pub struct CoupledSpinState {
    pub s: HalfInt,
    pub s_total: HalfInt,
    pub m: HalfInt,
    /// `Σ C^{ssS}_{m_a m_b M} |a, m_a>¹|b, m_b>²`
    pub tensor: Vec<ComplexF>,
    /// The same sum with `b` listed first.
    pub reordered: Vec<ComplexF>,
}

impl CoupledSpinState {
    /// `½(tensor + reordered)`.
    pub fn identical_limit(&self) -> Vec<ComplexF> {
        self.tensor.iter().zip(&self.reordered).map(|(x, y)| (x + y) * 0.5).collect()
    }

    pub fn identical_norm(&self) -> f64 {
        vec_norm(&self.identical_limit())
    }
}

/// Couples the pair in `o` (canonical construction) to total spin
/// `s_total` with projection `m`. The projections stored in `o` are ignored.
pub fn couple_spins(o: &OrderedPairDesc, s_total: HalfInt, m: HalfInt) -> Result<CoupledSpinState> {
    let s = o.first.s;
    if o.second.s != s {
        return Err(Error::SpinMismatch(s.to_string(), o.second.s.to_string()));
    }
    if !triangle(s, s, s_total) {
        return Err(triangle_err(s, s, s_total));
    }
    check_projection(s_total, m)?;
    let dim = s.multiplicity() * s.multiplicity();
    let mut fwd = vec![ComplexF::new(0.0, 0.0); dim];
    let mut rev = fwd.clone();
    for ma in s.projections() {
        for mb in s.projections() {
            let c = clebsch_gordan(s, s, s_total, ma, mb, m).to_f64();
            if c == 0.0 {
                continue;
            }
            let oo = o.with_projections(ma, mb)?;
            let t1 = ordered_product(Builder::Canonical, &oo)?;
            let t2 = ordered_product(Builder::Canonical, &oo.exchanged())?;
            for (acc, x) in fwd.iter_mut().zip(&t1) {
                *acc += x * c;
            }
            for (acc, x) in rev.iter_mut().zip(&t2) {
                *acc += x * c;
            }
        }
    }
    Ok(CoupledSpinState { s, s_total, m, tensor: fwd, reordered: rev })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvenSRow {
    pub s_total: HalfInt,
    pub norm: f64,
    pub allowed: bool,
}

pub const EVEN_S_EPS: f64 = 1e-3;
pub const EVEN_S_CUTOFF: f64 = 1e-6;

/// Identical-limit norms of the coupled states `S = 0..2s` at `M = 0`, for
/// two particles `ε = 1e-3` apart.
pub fn even_s_table(s: HalfInt) -> Result<Vec<EvenSRow>> {
    let p = Vec3::new(0.0, 0.6, 0.8);
    let pb = rotate(axis_angle_unchecked(perpendicular(p), EVEN_S_EPS), p).normalized().unwrap();
    let zero = HalfInt::from_int(0);
    let lo = if s.is_integer() { zero } else { HalfInt::from_twice(1) };
    let a = ParticleDesc::new("q", p, 1.0, s, lo)?;
    let b = ParticleDesc::new("q", pb, 1.0, s, lo)?;
    let o = OrderedPairDesc::new(&a, &b, 1)?;
    (0..=s.twice())
        .map(|k| {
            let st = HalfInt::from_int(k);
            let norm = couple_spins(&o, st, zero)?.identical_norm();
            Ok(EvenSRow { s_total: st, norm, allowed: norm >= EVEN_S_CUTOFF })
        })
        .collect()
}

/// Which rotation relates the two helicity frames in the plane-wave
/// construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum JwConvention {
    /// `R_y(π)·R_z(-π)`
    #[default]
    Standard,
    /// `R_y(π)` alone.
    YOnly,
}

impl JwConvention {
    pub fn rotation(self) -> SU2Element {
        match self {
            JwConvention::Standard => compose(rot_y(PI), rot_z(-PI)),
            JwConvention::YOnly => rot_y(PI),
        }
    }

    /// The phase `c` with `D^s(X)·e_{-λ} = c·e_λ`.
    pub fn ket_phase(self, s: HalfInt, lambda: HalfInt) -> ComplexF {
        match self {
            JwConvention::Standard => unit_phase(s),
            JwConvention::YOnly => unit_phase(s + lambda),
        }
    }

    /// The phase `f` with `D^J_{M,μ}(g·X)^* = f·D^J_{M,-μ}(g)^*`.
    pub fn d_phase(self, j: HalfInt, mu: HalfInt) -> ComplexF {
        match self {
            JwConvention::Standard => unit_phase(-j),
            JwConvention::YOnly => unit_phase(j - mu),
        }
    }
}

/// Which particle is listed first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOrder {
    AFirst,
    BFirst,
}

/// Species, spins and helicities of a pair with `p_b = -p_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct JwSpec {
    pub q_a: String,
    pub s_a: HalfInt,
    pub lambda_a: HalfInt,
    pub q_b: String,
    pub s_b: HalfInt,
    pub lambda_b: HalfInt,
    pub convention: JwConvention,
}

impl JwSpec {
    pub fn new(
        q_a: impl Into<String>,
        s_a: HalfInt,
        lambda_a: HalfInt,
        q_b: impl Into<String>,
        s_b: HalfInt,
        lambda_b: HalfInt,
    ) -> Result<Self> {
        check_projection(s_a, lambda_a)?;
        check_projection(s_b, lambda_b)?;
        Ok(JwSpec {
            q_a: q_a.into(),
            s_a,
            lambda_a,
            q_b: q_b.into(),
            s_b,
            lambda_b,
            convention: JwConvention::Standard,
        })
    }

    /// Two particles of one species.
    pub fn identical(q: impl Into<String>, s: HalfInt, lambda_a: HalfInt, lambda_b: HalfInt) -> Result<Self> {
        let q = q.into();
        Self::new(q.clone(), s, lambda_a, q, s, lambda_b)
    }

    pub fn with_convention(mut self, convention: JwConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_helicities(&self, lambda_a: HalfInt, lambda_b: HalfInt) -> Result<Self> {
        let mut o = self.clone();
        check_projection(o.s_a, lambda_a)?;
        check_projection(o.s_b, lambda_b)?;
        o.lambda_a = lambda_a;
        o.lambda_b = lambda_b;
        Ok(o)
    }

    /// Factor `f` with `|J M; b, a> = f·|J M; a, b>` for the partial-wave
    /// projections at total `j`.
    pub fn exchange_factor(&self, j: HalfInt) -> ComplexF {
        let c = self.convention;
        c.d_phase(j, self.lambda_b - self.lambda_a) * c.ket_phase(self.s_a, self.lambda_a)
            / c.ket_phase(self.s_b, self.lambda_b)
    }
}

/// Particle descriptions (a, then b) with independent helicity frames:
/// `G_a` the normal-range helicity rotation of `p`, `G_b = G_a·R_x(π)`.
/// Both are quantized along their own helicity axes.
pub fn independent_helicity_descs(spec: &JwSpec, p_dir: Vec3) -> Result<(ParticleDesc, ParticleDesc)> {
    if !p_dir.is_unit() {
        return Err(Error::NonUnitAxis(p_dir.norm()));
    }
    let g_a = canonical_to_helicity(p_dir);
    let seed = rotate(g_a, Vec3::Y);
    let mut frames = parallel_frames_with(p_dir, -p_dir, FrameOptions { seed: Some(seed), flip: false })?;
    frames.lift_a = g_a;
    frames.lift_b = compose(frames.r_ab, g_a);
    let a = ParticleDesc::new(spec.q_a.clone(), p_dir, 1.0, spec.s_a, spec.lambda_a)?.with_base(
        BaseKind::Helicity,
        frames.lift_a,
        Some(frames),
    );
    let b = ParticleDesc::new(spec.q_b.clone(), -p_dir, 1.0, spec.s_b, spec.lambda_b)?.with_base(
        BaseKind::Helicity,
        frames.lift_b,
        Some(frames),
    );
    Ok((a, b))
}

/// The plane-wave construction: the listed-first particle is quantized
/// along its own helicity axis, the other one in the first one's frame,
/// reached through the convention's rotation, with its helicity negated.
/// Returned as (a, b).
pub fn jw_descs(spec: &JwSpec, p_dir: Vec3, order: PairOrder) -> Result<(ParticleDesc, ParticleDesc)> {
    let (a, b) = independent_helicity_descs(spec, p_dir)?;
    let x = spec.convention.rotation();
    Ok(match order {
        PairOrder::AFirst => (a, b.with_rotation(x).with_m(-spec.lambda_b)?),
        PairOrder::BFirst => (a.with_rotation(x).with_m(-spec.lambda_a)?, b),
    })
}

pub fn jw_plane_wave(spec: &JwSpec, p_dir: Vec3, order: PairOrder) -> Result<PairState> {
    let (a, b) = jw_descs(spec, p_dir, order)?;
    symmetrized_pair(&a, &b)
}

/// `α(|a>|b> ⊕ |b>|a>)`: the symmetrized state split by which momentum
/// sits in the first slot. The two blocks are orthogonal because the
/// momenta differ.
fn momentum_resolved(a: &ParticleDesc, b: &ParticleDesc) -> Result<Vec<ComplexF>> {
    let (ka, kb) = (lab_ket(a)?, lab_ket(b)?);
    let alpha = std::f64::consts::FRAC_1_SQRT_2;
    Ok(tensor(&ka, &kb).into_iter().chain(tensor(&kb, &ka)).map(|x| x * alpha).collect())
}

/// Both sides of `D^J_{M,λb-λa}(g·X)^* = f·D^J_{M,λa-λb}(g)^*`.
pub fn d_exchange_identity(
    j: HalfInt,
    m: HalfInt,
    lambda_a: HalfInt,
    lambda_b: HalfInt,
    g: SU2Element,
    convention: JwConvention,
) -> Result<(ComplexF, ComplexF)> {
    let bad = |mu: HalfInt| Error::InvalidSpinProjection { s: j.to_string(), m: mu.to_string() };
    let mu = lambda_b - lambda_a;
    let lhs = big_d(j, compose(g, convention.rotation())).get(m, mu).ok_or_else(|| bad(m))?.conj();
    let rhs = convention.d_phase(j, mu) * big_d(j, g).get(m, -mu).ok_or_else(|| bad(-mu))?.conj();
    Ok((lhs, rhs))
}

/// Node counts of the sphere rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    /// Gauss-Legendre nodes in `cos θ`.
    pub n_theta: usize,
    /// Equally spaced azimuths.
    pub n_phi: usize,
}

impl GridSpec {
    /// `2J + 4` by `4J + 8`.
    pub fn for_j(j: HalfInt) -> Self {
        let tj = j.twice().max(0) as usize;
        GridSpec { n_theta: tj + 4, n_phi: 2 * tj + 8 }
    }

    pub fn check(&self, j: HalfInt) -> Result<()> {
        let tj = j.twice().max(0) as usize;
        if self.n_theta < tj + 2 || self.n_phi < 2 * (tj + 1) {
            return Err(Error::GridTooCoarse(format!(
                "{j} (n_theta {} < {} or n_phi {} < {})",
                self.n_theta,
                tj + 2,
                self.n_phi,
                2 * (tj + 1)
            )));
        }
        Ok(())
    }
}

/// A state sampled on the sphere rule: at each node, the spin tensor of
/// the pair with `p_a` along that node.
#[derive(Clone, Debug)]
pub struct PartialWaveState {
    pub j: HalfInt,
    pub m: HalfInt,
    pub grid: GridSpec,
    nodes: Vec<SphereNode>,
    values: Vec<Vec<ComplexF>>,
}

impl PartialWaveState {
    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    pub fn values(&self) -> &[Vec<ComplexF>] {
        &self.values
    }

    fn check_grid(&self, o: &PartialWaveState) -> Result<()> {
        if self.grid != o.grid || self.values.len() != o.values.len() {
            return Err(Error::InvalidArgument("partial waves sampled on different grids".into()));
        }
        if self.values.iter().zip(&o.values).any(|(x, y)| x.len() != y.len()) {
            return Err(Error::SpinMismatch(format!("{}", self.values[0].len()), format!("{}", o.values[0].len())));
        }
        Ok(())
    }

    /// `∫ dΩ <self(Ω)|o(Ω)>` by the grid rule.
    pub fn inner(&self, o: &PartialWaveState) -> Result<ComplexF> {
        self.check_grid(o)?;
        let terms: Vec<ComplexF> = self
            .nodes
            .iter()
            .zip(self.values.iter().zip(&o.values))
            .map(|(n, (x, y))| pairwise_sum(&x.iter().zip(y).map(|(u, v)| u.conj() * v).collect::<Vec<_>>()) * n.weight)
            .collect();
        Ok(pairwise_sum(&terms))
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).map(|z| z.re).unwrap_or(f64::NAN)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, c: ComplexF) -> PartialWaveState {
        let mut out = self.clone();
        out.values.iter_mut().flatten().for_each(|x| *x *= c);
        out
    }

    /// `self + c·o`
    pub fn add_scaled(&self, c: ComplexF, o: &PartialWaveState) -> Result<PartialWaveState> {
        self.check_grid(o)?;
        let mut out = self.clone();
        for (x, y) in out.values.iter_mut().zip(&o.values) {
            for (u, v) in x.iter_mut().zip(y) {
                *u += c * v;
            }
        }
        Ok(out)
    }

    /// Largest node-wise deviation from `o`.
    pub fn max_diff(&self, o: &PartialWaveState) -> f64 {
        self.values
            .iter()
            .zip(&o.values)
            .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).norm()))
            .fold(0.0, f64::max)
    }
}

/// `N_J ∫ dΩ D^J_{M,μ}(G)^* |plane wave at Ω>` with `N_J = sqrt((2J+1)/4π)`.
/// For `a` first, `G = G_a(Ω)` and `μ = λa - λb`; for `b` first the
/// rotation is `G_a(Ω)·X` and `μ = λb - λa`.
pub fn partial_wave_project(
    spec: &JwSpec,
    j: HalfInt,
    m: HalfInt,
    order: PairOrder,
    grid: GridSpec,
) -> Result<PartialWaveState> {
    check_projection(j, m)?;
    let mu = spec.lambda_a - spec.lambda_b;
    if mu.abs().twice() > j.twice() || !(j - mu).is_integer() {
        return Err(Error::InvalidSpinProjection { s: j.to_string(), m: mu.to_string() });
    }
    grid.check(j)?;
    let nodes = sphere_grid(grid.n_theta, grid.n_phi);
    let n_j = ((j.twice() + 1) as f64 / (4.0 * PI)).sqrt();
    let x = spec.convention.rotation();
    let values = nodes
        .par_iter()
        .map(|node| {
            let p = Vec3::from_polar(node.theta, node.phi);
            let g_a = canonical_to_helicity(p);
            let (lift, mu_o) = match order {
                PairOrder::AFirst => (g_a, mu),
                PairOrder::BFirst => (compose(g_a, x), -mu),
            };
            let coeff = big_d(j, lift).get(m, mu_o).expect("projection checked above").conj() * n_j;
            let (a, b) = jw_descs(spec, p, order)?;
            Ok(momentum_resolved(&a, &b)?.into_iter().map(|v| v * coeff).collect())
        })
        .collect::<Result<Vec<Vec<ComplexF>>>>()?;
    Ok(PartialWaveState { j, m, grid, nodes, values })
}

/// `u(λa, λb)` amplitudes of an LS state over helicity pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct LSState {
    pub j: HalfInt,
    pub m: HalfInt,
    pub l: HalfInt,
    pub s_total: HalfInt,
    pub s_a: HalfInt,
    pub s_b: HalfInt,
    /// `(λa, λb, u)` for every helicity pair, zeros included.
    pub amps: Vec<(HalfInt, HalfInt, SignedSqrtRational)>,
}

impl LSState {
    pub fn amplitude(&self, lambda_a: HalfInt, lambda_b: HalfInt) -> SignedSqrtRational {
        self.amps
            .iter()
            .find(|(x, y, _)| *x == lambda_a && *y == lambda_b)
            .map(|(_, _, u)| u.clone())
            .unwrap_or_else(SignedSqrtRational::zero)
    }

    /// True when every amplitude vanishes.
    pub fn is_null(&self) -> bool {
        self.amps.iter().all(|(_, _, u)| u.is_zero())
    }

    /// The sign `σ` with `u(λb, λa) = σ·u(λa, λb)` for all pairs, if one
    /// exists. Only meaningful for equal spins.
    pub fn swap_sign(&self) -> Option<i8> {
        let mut sigma = None;
        for (la, lb, u) in &self.amps {
            let v = self.amplitude(*lb, *la);
            let s = match (u.is_zero(), v.is_zero()) {
                (true, true) => continue,
                (false, false) if u.radicand() == v.radicand() => u.sign() * v.sign(),
                _ => return None,
            };
            match sigma {
                None => sigma = Some(s),
                Some(t) if t != s => return None,
                _ => {}
            }
        }
        sigma
    }

    /// `Σ u(λa, λb)·|J M; λa λb>` on the grid, `a` listed first.
    pub fn on_grid(&self, q: &str, convention: JwConvention, grid: GridSpec) -> Result<PartialWaveState> {
        let base = JwSpec::new(q, self.s_a, -self.s_a, q, self.s_b, -self.s_b)?.with_convention(convention);
        self.sum_over(&base, PairOrder::AFirst, grid, |la, lb| (la, lb))
    }

    /// The same LS state written with the other particle first:
    /// `Σ u(λ₁, λ₂)·|J M; b:λ₁, a:λ₂>`. Needs equal spins.
    pub fn on_grid_reordered(&self, q: &str, convention: JwConvention, grid: GridSpec) -> Result<PartialWaveState> {
        if self.s_a != self.s_b {
            return Err(Error::SpinMismatch(self.s_a.to_string(), self.s_b.to_string()));
        }
        let base = JwSpec::new(q, self.s_a, -self.s_a, q, self.s_b, -self.s_b)?.with_convention(convention);
        self.sum_over(&base, PairOrder::BFirst, grid, |l1, l2| (l2, l1))
    }

    fn sum_over(
        &self,
        base: &JwSpec,
        order: PairOrder,
        grid: GridSpec,
        helicities: impl Fn(HalfInt, HalfInt) -> (HalfInt, HalfInt),
    ) -> Result<PartialWaveState> {
        let mut acc: Option<PartialWaveState> = None;
        for (l1, l2, u) in &self.amps {
            if u.is_zero() {
                continue;
            }
            let (la, lb) = helicities(*l1, *l2);
            let pw = partial_wave_project(&base.with_helicities(la, lb)?, self.j, self.m, order, grid)?;
            let c = ComplexF::new(u.to_f64()?, 0.0);
            acc = Some(match acc {
                None => pw.scaled(c),
                Some(x) => x.add_scaled(c, &pw)?,
            });
        }
        acc.ok_or_else(|| {
            Error::InvalidArgument(format!("LS state J={} L={} S={} is null", self.j, self.l, self.s_total))
        })
    }
}

/// `u(λa, λb) = sqrt((2J+1)/(2L+1))·C^{L S J}_{0 λ λ}·C^{s_a s_b S}_{λa, -λb, λ}`
/// with `λ = λa - λb`. With this prefactor `Σ|u|² = ((2J+1)/(2L+1))²`.
pub fn ls_state(j: HalfInt, m: HalfInt, l: HalfInt, s_total: HalfInt, s_a: HalfInt, s_b: HalfInt) -> Result<LSState> {
    if !l.is_integer() || l.twice() < 0 {
        return Err(Error::TriangleViolation(format!("L = {l} is not a non-negative integer")));
    }
    if !triangle(l, s_total, j) {
        return Err(triangle_err(l, s_total, j));
    }
    if !triangle(s_a, s_b, s_total) {
        return Err(triangle_err(s_a, s_b, s_total));
    }
    check_projection(j, m)?;
    let pre = SignedSqrtRational::new(1, BigRational::new((j.twice() + 1).into(), (l.twice() + 1).into()));
    let zero = HalfInt::from_int(0);
    let mut amps = Vec::with_capacity(s_a.multiplicity() * s_b.multiplicity());
    for la in s_a.projections() {
        for lb in s_b.projections() {
            let lam = la - lb;
            let u = if lam.abs().twice() > s_total.twice().min(j.twice()) {
                SignedSqrtRational::zero()
            } else {
                let c1 = clebsch_gordan(l, s_total, j, zero, lam, lam).value;
                let c2 = clebsch_gordan(s_a, s_b, s_total, la, -lb, lam).value;
                &(&pre * &c1) * &c2
            };
            amps.push((la, lb, u));
        }
    }
    Ok(LSState { j, m, l, s_total, s_a, s_b, amps })
}

/// One `(J, L, S)` row of the LS exclusion table.
#[derive(Clone, Debug, PartialEq)]
pub struct LsRow {
    pub j: HalfInt,
    pub l: HalfInt,
    pub s_total: HalfInt,
    /// `σ` with `u(λb, λa) = σ·u(λa, λb)`.
    pub swap_sign: i8,
    /// `‖½(X + X')‖² / ‖X‖²` on the grid.
    pub norm_sq: f64,
    pub allowed: bool,
}

pub const LS_RELATIVE_CUTOFF: f64 = 1e-6;

/// Every non-null LS state of two identical spin-`s` particles with
/// `J ≤ j_max`, `M = 0`, classified twice: algebraically by
/// `(-1)^J σ = +1` and numerically by the norm of `½(X + X')` on the grid,
/// `X'` being the state rewritten with the particles listed the other way.
pub fn ls_exclusion_check(s: HalfInt, j_max: u32, convention: JwConvention) -> Result<Vec<LsRow>> {
    let zero = HalfInt::from_int(0);
    let mut rows = Vec::new();
    for jj in 0..=j_max as i32 {
        let j = HalfInt::from_int(jj);
        let grid = GridSpec::for_j(j);
        for st in 0..=s.twice() {
            let st = HalfInt::from_int(st);
            for l in (jj - st.as_int().unwrap()).abs()..=jj + st.as_int().unwrap() {
                let l = HalfInt::from_int(l);
                let ls = ls_state(j, zero, l, st, s, s)?;
                if ls.is_null() {
                    continue;
                }
                let sigma = ls
                    .swap_sign()
                    .ok_or_else(|| Error::OracleDisagreement(format!("J={j} L={l} S={st}: no exchange sign")))?;
                let x = ls.on_grid("q", convention, grid)?;
                let xr = ls.on_grid_reordered("q", convention, grid)?;
                let phi = x.scaled(ComplexF::new(0.5, 0.0)).add_scaled(ComplexF::new(0.5, 0.0), &xr)?;
                let norm_sq = phi.norm_sq() / x.norm_sq();
                let algebraic = i32::from(sigma) * if jj % 2 == 0 { 1 } else { -1 } == 1;
                rows.push(LsRow { j, l, s_total: st, swap_sign: sigma, norm_sq, allowed: algebraic });
            }
        }
    }
    let top = rows.iter().map(|r| r.norm_sq).fold(0.0, f64::max);
    for r in &rows {
        let numeric = r.norm_sq > LS_RELATIVE_CUTOFF * top;
        if numeric != r.allowed {
            return Err(Error::OracleDisagreement(format!(
                "J={} L={} S={} (norm² {:e}, σ {})",
                r.j, r.l, r.s_total, r.norm_sq, r.swap_sign
            )));
        }
    }
    Ok(rows)
}
