//! Two-particle states: order-free counting, the permutation-symmetric
//! product, the two order-dependent constructions and the exchange phases
//! they carry.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{parallel_frames_with, FrameKind, FrameOptions, FramePair};
use crate::numerics::{halfint_phase, ComplexF, HalfInt, TAU};
use crate::states::{canonical_to_helicity, extended_angle_ket, lab_ket, BaseKind, ParticleDesc, SpinKet};
use crate::su2::{axis_angle_unchecked, compose, inverse, rotate, SU2Element, Vec3};

/// Number of ways to place `n_entities` indistinguishable entities in
/// `n_states` states: `C(n + d - 1, n)`.
pub fn multiset_count(n_entities: u64, n_states: u64) -> u128 {
    if n_entities == 0 {
        return 1;
    }
    if n_states == 0 {
        return 0;
    }
    let (n, k) = (n_entities + n_states - 1, n_entities.min(n_states - 1));
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// An order-free collection: sorted keys with their population numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultisetState<K> {
    pub entries: Vec<(K, usize)>,
}

pub fn canonicalize_multiset<K: Ord + Clone>(keys: &[K]) -> MultisetState<K> {
    let mut counts = BTreeMap::new();
    for k in keys {
        *counts.entry(k.clone()).or_insert(0usize) += 1;
    }
    MultisetState { entries: counts.into_iter().collect() }
}

/// Outer product `a ⊗ b`, row-major over `a`'s index.
pub fn tensor(a: &SpinKet, b: &SpinKet) -> Vec<ComplexF> {
    a.amps.iter().flat_map(|x| b.amps.iter().map(move |y| x * y)).collect()
}

pub fn vec_norm(v: &[ComplexF]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `<v|w>`.
pub fn vec_inner(v: &[ComplexF], w: &[ComplexF]) -> ComplexF {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// A permutation-symmetric two-particle spin state.
///
/// For equal spins the amplitudes are the single tensor
/// `α(k_a ⊗ k_b + k_b ⊗ k_a)`. For unequal spins they are the direct sum of
/// the `lo ⊗ hi` and `hi ⊗ lo` blocks, taken in order of spin, so the layout
/// does not depend on which particle was passed first.
#[derive(Clone, Debug)]
pub struct PairState {
    /// The smaller spin.
    pub s_a: HalfInt,
    /// The larger spin.
    pub s_b: HalfInt,
    amps: Vec<ComplexF>,
    pub descs: [ParticleDesc; 2],
    pub frames: Option<FramePair>,
}

impl PairState {
    pub fn amps(&self) -> &[ComplexF] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    pub fn inner(&self, o: &PairState) -> ComplexF {
        vec_inner(&self.amps, &o.amps)
    }
}

fn same_frames(p: &FramePair, q: &FramePair) -> bool {
    let d = |x: &crate::geometry::Frame, y: &crate::geometry::Frame| x.distance(y) <= TAU;
    p.kind == q.kind
        && ((d(&p.frame_a, &q.frame_a) && d(&p.frame_b, &q.frame_b))
            || (d(&p.frame_a, &q.frame_b) && d(&p.frame_b, &q.frame_a)))
}

fn check_frames(d_a: &ParticleDesc, d_b: &ParticleDesc) -> Result<Option<FramePair>> {
    for d in [d_a, d_b] {
        let want = match d.base {
            BaseKind::Canonical => None,
            BaseKind::Helicity => Some(FrameKind::Parallel),
            BaseKind::Bisecting => Some(FrameKind::Bisecting),
        };
        match (want, &d.frames) {
            (Some(kind), Some(p)) if p.kind != kind => return Err(Error::FrameMismatch),
            (Some(_), None) => return Err(Error::FrameMismatch),
            _ => {}
        }
    }
    match (&d_a.frames, &d_b.frames) {
        (None, None) => Ok(None),
        (Some(p), Some(q)) if same_frames(p, q) => Ok(Some(*p)),
        _ => Err(Error::FrameMismatch),
    }
}

/// `α(|a>|b> + |b>|a>)` with `α = 1/√2`, kets taken in the lab basis.
/// Swapping the arguments gives bit-identical amplitudes.
pub fn symmetrized_pair(d_a: &ParticleDesc, d_b: &ParticleDesc) -> Result<PairState> {
    let frames = check_frames(d_a, d_b)?;
    let (ka, kb) = (lab_ket(d_a)?, lab_ket(d_b)?);
    let alpha = std::f64::consts::FRAC_1_SQRT_2;
    let amps = if ka.s == kb.s {
        let ab = tensor(&ka, &kb);
        let ba = tensor(&kb, &ka);
        ab.iter().zip(&ba).map(|(x, y)| (x + y) * alpha).collect()
    } else {
        let (lo, hi) = if ka.s.twice() < kb.s.twice() { (&ka, &kb) } else { (&kb, &ka) };
        tensor(lo, hi).into_iter().chain(tensor(hi, lo)).map(|x| x * alpha).collect()
    };
    let (s_a, s_b) = if ka.s.twice() <= kb.s.twice() { (ka.s, kb.s) } else { (kb.s, ka.s) };
    Ok(PairState { s_a, s_b, amps, descs: [d_a.clone(), d_b.clone()], frames })
}

/// The two order-dependent constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builder {
    /// Helicity base frames, common canonical quantization frame.
    Canonical,
    /// Canonical base frame, helicity quantization frames.
    Helicity,
}

/// A pair of particles listed in a definite order, "1" then "2".
///
/// The frame pair is always built from the particles in their original
/// `(a, b)` order and is left untouched by [`OrderedPairDesc::exchanged`].
#[derive(Clone, Debug)]
pub struct OrderedPairDesc {
    pub first: ParticleDesc,
    pub second: ParticleDesc,
    /// Sign of the π in the half-turn fixing the second particle's frame.
    pub r12_sign: i32,
    pub frames: FramePair,
    pub a_first: bool,
}

impl OrderedPairDesc {
    pub fn new(a: &ParticleDesc, b: &ParticleDesc, r12_sign: i32) -> Result<Self> {
        Self::new_with(a, b, r12_sign, FrameOptions::default())
    }

    pub fn new_with(a: &ParticleDesc, b: &ParticleDesc, r12_sign: i32, opts: FrameOptions) -> Result<Self> {
        if r12_sign != 1 && r12_sign != -1 {
            return Err(Error::InvalidArgument(format!("r12 sign must be ±1, got {r12_sign}")));
        }
        let frames = parallel_frames_with(a.p_dir, b.p_dir, opts)?;
        Ok(OrderedPairDesc { first: a.clone(), second: b.clone(), r12_sign, frames, a_first: true })
    }

    /// The same pair with new spin projections for the first and second
    /// particle.
    pub fn with_projections(&self, m_first: HalfInt, m_second: HalfInt) -> Result<Self> {
        let mut o = self.clone();
        o.first = o.first.with_m(m_first)?;
        o.second = o.second.with_m(m_second)?;
        Ok(o)
    }

    /// The same two particles listed in the opposite order.
    pub fn exchanged(&self) -> Self {
        OrderedPairDesc {
            first: self.second.clone(),
            second: self.first.clone(),
            r12_sign: self.r12_sign,
            frames: self.frames,
            a_first: !self.a_first,
        }
    }

    fn half_turn(&self) -> SU2Element {
        axis_angle_unchecked(self.frames.k, f64::from(self.r12_sign) * PI)
    }

    fn first_to_second(&self) -> SU2Element {
        if self.a_first {
            self.frames.r_ab
        } else {
            self.frames.r_ba
        }
    }

    /// The two descriptions with their frames filled in by `builder`.
    pub fn describe(&self, builder: Builder) -> (ParticleDesc, ParticleDesc) {
        let f = &self.frames;
        let half = self.half_turn();
        match builder {
            Builder::Canonical => {
                let (lift_1, lift_2) = if self.a_first { (f.lift_a, f.lift_b) } else { (f.lift_b, f.lift_a) };
                // R_1 takes particle 1's helicity frame into the canonical frame
                let r1 = inverse(lift_1);
                let first = self.first.clone().with_base(BaseKind::Helicity, lift_1, Some(*f)).with_rotation(r1);
                let second = self
                    .second
                    .clone()
                    .with_base(BaseKind::Helicity, lift_2, Some(*f))
                    .with_rotation(compose(r1, half));
                (first, second)
            }
            Builder::Helicity => {
                let (a, _) = if self.a_first { (&self.first, &self.second) } else { (&self.second, &self.first) };
                let bar_a = canonical_to_helicity(a.p_dir);
                // only particle a uses the normal-range angles; b follows from it
                let bar_first = if self.a_first { bar_a } else { compose(f.r_ab, bar_a) };
                let first = self
                    .first
                    .clone()
                    .with_base(BaseKind::Canonical, SU2Element::IDENTITY, Some(*f))
                    .with_rotation(bar_first);
                let second = self
                    .second
                    .clone()
                    .with_base(BaseKind::Canonical, SU2Element::IDENTITY, Some(*f))
                    .with_rotation(compose(half, bar_first));
                (first, second)
            }
        }
    }

    /// The phase the construction predicts for reversing the order:
    /// `(-1)^{2 s_1}` when the half-turn of the second particle coincides
    /// with the relating rotation it stands in for, `(-1)^{2 s_2}` otherwise.
    pub fn expected_phase(&self, builder: Builder) -> i32 {
        let half = self.half_turn();
        let matches = match builder {
            Builder::Canonical => half.approx_eq(&inverse(self.first_to_second()), TAU),
            Builder::Helicity => half.approx_eq(&self.first_to_second(), TAU),
        };
        halfint_phase(if matches { self.first.s } else { self.second.s })
    }
}

fn check_same_species(o: &OrderedPairDesc) -> Result<()> {
    if o.first.base != o.second.base {
        return Err(Error::FrameMismatch);
    }
    Ok(())
}

pub fn ordered_pair(builder: Builder, o: &OrderedPairDesc) -> Result<PairState> {
    check_same_species(o)?;
    let (first, second) = o.describe(builder);
    symmetrized_pair(&first, &second)
}

pub fn ordered_pair_canonical(o: &OrderedPairDesc) -> Result<PairState> {
    ordered_pair(Builder::Canonical, o)
}

pub fn ordered_pair_helicity(o: &OrderedPairDesc) -> Result<PairState> {
    ordered_pair(Builder::Helicity, o)
}

/// `|1> ⊗ |2>` in slot order, lab basis.
pub fn ordered_product(builder: Builder, o: &OrderedPairDesc) -> Result<Vec<ComplexF>> {
    let (first, second) = o.describe(builder);
    Ok(tensor(&lab_ket(&first)?, &lab_ket(&second)?))
}

/// Best-fit `c` with `w ≈ c·v`, failing when the residual exceeds `τ‖v‖`.
pub fn proportionality(v: &[ComplexF], w: &[ComplexF]) -> Result<ComplexF> {
    let vv = vec_inner(v, v).re;
    if vv <= 0.0 {
        return Err(Error::InvalidArgument("reference state is zero".into()));
    }
    let c = vec_inner(v, w) / vv;
    let residual: f64 = v.iter().zip(w).map(|(x, y)| (y - c * x).norm_sqr()).sum::<f64>().sqrt();
    let scale = vv.sqrt();
    if residual > TAU * scale {
        return Err(Error::NotProportional(residual / scale));
    }
    Ok(c)
}

/// `c` with `State(order reversed) = c · State(o)`.
pub fn exchange_phase(builder: Builder, o: &OrderedPairDesc) -> Result<ComplexF> {
    let v = ordered_pair(builder, o)?;
    let w = ordered_pair(builder, &o.exchanged())?;
    proportionality(v.amps(), w.amps())
}

/// A fixed unit vector perpendicular to `p`.
pub fn perpendicular(p: Vec3) -> Vec3 {
    let trial = if p.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
    p.cross(trial).normalized().expect("trial axis is not parallel to p")
}

/// Norm of `½(|a>¹|b>² + |b>¹|a>²)` for two copies of one state, with the
/// second direction `ε` away from the first, for each `ε`. Vanishes in the
/// limit for half-integer spin.
pub fn pauli_norm(builder: Builder, q: &str, p_dir: Vec3, s: HalfInt, m: HalfInt, eps: &[f64]) -> Result<Vec<f64>> {
    let a = ParticleDesc::new(q, p_dir, 1.0, s, m)?;
    let axis = perpendicular(p_dir);
    eps.iter()
        .map(|&e| {
            let b =
                ParticleDesc::new(q, rotate(axis_angle_unchecked(axis, e), p_dir).normalized().unwrap(), 1.0, s, m)?;
            let o = OrderedPairDesc::new(&a, &b, 1)?;
            let fwd = ordered_product(builder, &o)?;
            let rev = ordered_product(builder, &o.exchanged())?;
            let sum: Vec<ComplexF> = fwd.iter().zip(&rev).map(|(x, y)| (x + y) * 0.5).collect();
            Ok(vec_norm(&sum))
        })
        .collect()
}

/// Value at `ε = 0` of the polynomial through all samples (Neville's scheme),
/// i.e. repeated Richardson extrapolation with integer orders.
pub fn extrapolate_to_zero(eps: &[f64], values: &[f64]) -> f64 {
    let n = eps.len().min(values.len());
    if n == 0 {
        return f64::NAN;
    }
    let mut p: Vec<f64> = values[..n].to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (eps[i], eps[i + level]);
            p[i] = (xi * p[i + 1] - xj * p[i]) / (xi - xj);
        }
    }
    p[0]
}

/// The coordinate-space exchange: particle 2 sits at `φ + π`; exchanging
/// while keeping that angle fixed moves particle 1 to `φ + 2π`. Returns the
/// factor relating the exchanged wave function to the original.
pub fn quick_exchange_phase(
    s_a: HalfInt,
    m_a: HalfInt,
    s_b: HalfInt,
    m_b: HalfInt,
    theta: f64,
    phi: f64,
) -> Result<ComplexF> {
    let a0 = extended_angle_ket(s_a, m_a, theta, phi)?;
    let b1 = extended_angle_ket(s_b, m_b, theta, phi + PI)?;
    let a2 = extended_angle_ket(s_a, m_a, theta, phi + 2.0 * PI)?;
    proportionality(&tensor(&a0, &b1), &tensor(&a2, &b1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{bisecting_frames, parallel_frames};
    use crate::states::make_ket;
    use crate::su2::{from_euler_zyz, mat3_distance, project_so3};

    /// All orderings of a small slice.
    fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
        out
    }

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn particle(p: Vec3, ts: i32, tm: i32) -> ParticleDesc {
        ParticleDesc::new("x", p.normalized().unwrap(), 1.0, h(ts), h(tm)).unwrap()
    }

    fn c_close(c: ComplexF, re: f64) -> bool {
        (c - ComplexF::new(re, 0.0)).norm() < 1e-10
    }

    /// Brute force: ordered lists of length n over d symbols, deduplicated by sorting.
    fn brute_count(n: usize, d: usize) -> usize {
        let mut seen = std::collections::BTreeSet::new();
        let total = d.pow(n as u32);
        for mut code in 0..total {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push(code % d);
                code /= d;
            }
            v.sort();
            seen.insert(v);
        }
        seen.len()
    }

    #[test]
    fn multiset_count_examples() {
        assert_eq!(multiset_count(2, 2), 3);
        for d in 1..6 {
            assert_eq!(multiset_count(1, d), u128::from(d));
        }
        assert_eq!(multiset_count(3, 2), 4);
        for n in 0..=5 {
            for d in 1..=4 {
                assert_eq!(multiset_count(n as u64, d as u64), brute_count(n, d) as u128, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn canonicalize_examples() {
        let ht = canonicalize_multiset(&["H", "T"]);
        assert_eq!(ht, canonicalize_multiset(&["T", "H"]));
        assert_eq!(ht.entries, vec![("H", 1), ("T", 1)]);
        assert_eq!(canonicalize_multiset(&["H", "H"]).entries, vec![("H", 2)]);
        let items = [7, 3, 7];
        let all: Vec<_> = permutations(&items).iter().map(|p| canonicalize_multiset(p)).collect();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|m| *m == all[0]));
    }

    fn helicity_pair(pa: Vec3, pb: Vec3, ts: i32, tma: i32, tmb: i32) -> (ParticleDesc, ParticleDesc) {
        let f = parallel_frames(pa, pb).unwrap();
        let a = particle(pa, ts, tma).with_base(BaseKind::Helicity, f.lift_a, Some(f));
        let b = particle(pb, ts, tmb).with_base(BaseKind::Helicity, f.lift_b, Some(f));
        (a, b)
    }

    #[test]
    fn symmetrized_examples() {
        let (a, b) = helicity_pair(Vec3::X, Vec3::Y, 1, 1, -1);
        let ab = symmetrized_pair(&a, &b).unwrap();
        let ba = symmetrized_pair(&b, &a).unwrap();
        assert_eq!(ab.amps(), ba.amps());
        let up = particle(Vec3::X, 1, 1);
        let down = particle(Vec3::Y, 1, -1);
        assert!((symmetrized_pair(&up, &down).unwrap().norm() - 1.0).abs() < TAU);

        for ts in 0..=3 {
            let (a, _) = helicity_pair(Vec3::X, Vec3::Y, ts, ts, ts);
            let st = symmetrized_pair(&a, &a).unwrap();
            let k = lab_ket(&a).unwrap();
            let kk = tensor(&k, &k);
            assert!(st.norm() > 1.0);
            let c = proportionality(&kk, st.amps()).unwrap();
            assert!(c_close(c, 2f64.sqrt()));
        }
    }

    #[test]
    fn unequal_spins_use_a_direct_sum() {
        let f = parallel_frames(Vec3::X, Vec3::Z).unwrap();
        let a = particle(Vec3::X, 1, 1).with_base(BaseKind::Helicity, f.lift_a, Some(f));
        let b = particle(Vec3::Z, 2, 0).with_base(BaseKind::Helicity, f.lift_b, Some(f));
        let ab = symmetrized_pair(&a, &b).unwrap();
        assert_eq!(ab.amps().len(), 12);
        assert_eq!(ab.amps(), symmetrized_pair(&b, &a).unwrap().amps());
        assert!((ab.norm() - 1.0).abs() < TAU);
    }

    #[test]
    fn frame_mismatch_detected() {
        let (a, _) = helicity_pair(Vec3::X, Vec3::Y, 1, 1, 1);
        let (_, b) = helicity_pair(Vec3::X, Vec3::Z, 1, 1, 1);
        assert_eq!(symmetrized_pair(&a, &b).unwrap_err(), Error::FrameMismatch);
        let bis = bisecting_frames(Vec3::X, Vec3::Y).unwrap();
        let c = particle(Vec3::Y, 1, 1).with_base(BaseKind::Helicity, bis.lift_b, Some(bis));
        assert_eq!(symmetrized_pair(&a, &c).unwrap_err(), Error::FrameMismatch);
    }

    #[test]
    fn canonical_builder_shares_one_canonical_frame() {
        let a = particle(Vec3::new(0.2, 0.9, -0.3), 1, 1);
        let b = particle(Vec3::new(-0.5, 0.1, 0.8), 1, -1);
        for sign in [1, -1] {
            let o = OrderedPairDesc::new(&a, &b, sign).unwrap();
            let (d1, d2) = o.describe(Builder::Canonical);
            let (q1, q2) = (d1.quantization_lift(), d2.quantization_lift());
            assert!(mat3_distance(&project_so3(q1), &project_so3(q2)) < 1e-12);
            assert!(mat3_distance(&project_so3(q1), &crate::su2::MAT3_IDENTITY) < 1e-12);
            // r_bs differ by a half-turn on the right
            let diff = compose(inverse(d1.r_bs), d2.r_bs);
            assert!(diff.w.abs() < 1e-12);
        }
    }

    #[test]
    fn exchange_phase_examples() {
        let (pa, pb) = (Vec3::X, Vec3::Y);
        // canonical, spin 1/2, R_21 = r_ba
        let o = OrderedPairDesc::new(&particle(pa, 1, 1), &particle(pb, 1, 1), -1).unwrap();
        assert!(c_close(exchange_phase(Builder::Canonical, &o).unwrap(), -1.0));
        for builder in [Builder::Canonical, Builder::Helicity] {
            for sign in [1, -1] {
                let o = OrderedPairDesc::new(&particle(pa, 2, 0), &particle(pb, 2, 2), sign).unwrap();
                assert!(c_close(exchange_phase(builder, &o).unwrap(), 1.0));
            }
        }
        let (a, b) = helicity_pair(pa, pb, 3, 1, -3);
        let ab = symmetrized_pair(&a, &b).unwrap();
        let ba = symmetrized_pair(&b, &a).unwrap();
        assert!(c_close(proportionality(ab.amps(), ba.amps()).unwrap(), 1.0));
    }

    #[test]
    fn helicity_builder_examples() {
        let (pa, pb) = (Vec3::new(0.3, 0.4, 0.5), Vec3::new(-0.7, 0.2, 0.1));
        let o = OrderedPairDesc::new(&particle(pa, 1, 1), &particle(pb, 1, -1), 1).unwrap();
        assert!(c_close(exchange_phase(Builder::Helicity, &o).unwrap(), -1.0));
        let o = OrderedPairDesc::new(&particle(pa, 2, 2), &particle(pb, 2, 0), 1).unwrap();
        assert!(c_close(exchange_phase(Builder::Helicity, &o).unwrap(), 1.0));
        let a = particle(pa, 1, 1);
        let b = particle(pb, 2, 0);
        let plus = exchange_phase(Builder::Helicity, &OrderedPairDesc::new(&a, &b, 1).unwrap()).unwrap();
        let minus = exchange_phase(Builder::Helicity, &OrderedPairDesc::new(&a, &b, -1).unwrap()).unwrap();
        assert!(c_close(plus * minus, -1.0));
    }

    #[test]
    fn helicity_builder_quantizes_along_the_momenta() {
        let (pa, pb) =
            (Vec3::new(0.3, 0.4, 0.5).normalized().unwrap(), Vec3::new(-0.7, 0.2, 0.1).normalized().unwrap());
        let o = OrderedPairDesc::new(&particle(pa, 1, 1), &particle(pb, 1, 1), 1).unwrap();
        for oo in [o.clone(), o.exchanged()] {
            let (d1, d2) = oo.describe(Builder::Helicity);
            assert!(rotate(d1.quantization_lift(), Vec3::Z).distance(d1.p_dir) < 1e-12);
            assert!(rotate(d2.quantization_lift(), Vec3::Z).distance(d2.p_dir) < 1e-12);
        }
    }

    #[test]
    fn expected_phase_matches_the_table() {
        let a = particle(Vec3::X, 1, 1);
        let b = particle(Vec3::Y, 2, 0);
        // canonical: (-1)^{2s_a} when R_21 = r_ba, i.e. sign -1
        assert_eq!(OrderedPairDesc::new(&a, &b, -1).unwrap().expected_phase(Builder::Canonical), -1);
        assert_eq!(OrderedPairDesc::new(&a, &b, 1).unwrap().expected_phase(Builder::Canonical), 1);
        // helicity: (-1)^{2s_a} when R_12 = r_ab, i.e. sign +1
        assert_eq!(OrderedPairDesc::new(&a, &b, 1).unwrap().expected_phase(Builder::Helicity), -1);
        assert_eq!(OrderedPairDesc::new(&a, &b, -1).unwrap().expected_phase(Builder::Helicity), 1);
    }

    #[test]
    fn flipped_half_turn_keeps_the_rule() {
        let a = particle(Vec3::new(1.0, 1.0, 0.0), 1, 1);
        let b = particle(Vec3::new(0.0, 1.0, 1.0), 2, 2);
        let opts = FrameOptions { seed: None, flip: true };
        for builder in [Builder::Canonical, Builder::Helicity] {
            for sign in [1, -1] {
                let o = OrderedPairDesc::new_with(&a, &b, sign, opts).unwrap();
                let c = exchange_phase(builder, &o).unwrap();
                assert!(c_close(c, f64::from(o.expected_phase(builder))));
            }
        }
    }

    #[test]
    fn pauli_examples() {
        let eps = [1e-1, 1e-2, 1e-3];
        for builder in [Builder::Canonical, Builder::Helicity] {
            let half = pauli_norm(builder, "e", Vec3::Z, HalfInt::HALF, HalfInt::HALF, &eps).unwrap();
            assert!(half[2] <= 1e-3, "{builder:?} {half:?}");
            assert!(half.windows(2).all(|w| w[1] <= w[0] + 1e-15));
            assert!(extrapolate_to_zero(&eps, &half).abs() < 1e-6);

            let one = pauli_norm(builder, "d", Vec3::Z, HalfInt::ONE, HalfInt::ZERO, &eps).unwrap();
            assert!((extrapolate_to_zero(&eps, &one) - 1.0).abs() < 1e-6);

            let three = pauli_norm(builder, "o", Vec3::new(0.0, 0.6, 0.8), h(3), h(1), &eps).unwrap();
            assert!(extrapolate_to_zero(&eps, &three).abs() < 1e-6);
        }
    }

    #[test]
    fn extrapolation_is_exact_on_polynomials() {
        let eps = [0.3, 0.1, 0.02];
        let v: Vec<f64> = eps.iter().map(|e| 2.0 - 3.0 * e + 0.5 * e * e).collect();
        assert!((extrapolate_to_zero(&eps, &v) - 2.0).abs() < 1e-13);
        assert_eq!(extrapolate_to_zero(&[0.5], &[4.0]), 4.0);
    }

    #[test]
    fn quick_version_examples() {
        for ts in 1..=4 {
            for (ta, tb) in [(ts, ts), (ts, 1), (ts, 2)] {
                let c = quick_exchange_phase(h(ta), h(ta), h(tb), h(-tb), 0.7, 1.3).unwrap();
                assert!(c_close(c, f64::from(halfint_phase(h(ta)))));
            }
        }
    }

    #[test]
    fn base_ket_and_lab_ket_differ_by_the_base_lift() {
        let (a, _) = helicity_pair(Vec3::X, Vec3::Y, 2, 2, 0);
        let a = a.with_rotation(from_euler_zyz(0.1, 0.2, 0.3));
        let via = crate::states::rotate_frame(&make_ket(&a).unwrap(), a.base_lift);
        assert!(via.max_diff(&lab_ket(&a).unwrap()) < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unit() -> impl Strategy<Value = Vec3> {
            (-1.0f64..1.0, 0.0f64..2.0 * PI).prop_map(|(c, p)| Vec3::from_polar(c.acos(), p))
        }

        fn spin_and_m() -> impl Strategy<Value = (i32, i32)> {
            (0i32..=3).prop_flat_map(|ts| (Just(ts), 0..=ts).prop_map(|(ts, k)| (ts, ts - 2 * k)))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn symmetrized_is_permutation_invariant(pa in unit(), pb in unit(), sa in spin_and_m(), sb in spin_and_m(),
                                                   ra in -7.0f64..7.0, rb in -7.0f64..7.0) {
                prop_assume!(pa.cross(pb).norm() > 1e-3);
                let f = parallel_frames(pa, pb).unwrap();
                let a = particle(pa, sa.0, sa.1).with_base(BaseKind::Helicity, f.lift_a, Some(f)).with_rotation(from_euler_zyz(ra, 0.3, rb));
                let b = particle(pb, sb.0, sb.1).with_base(BaseKind::Helicity, f.lift_b, Some(f)).with_rotation(from_euler_zyz(rb, 1.1, ra));
                let ab = symmetrized_pair(&a, &b).unwrap();
                let ba = symmetrized_pair(&b, &a).unwrap();
                prop_assert_eq!(ab.amps(), ba.amps());
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(50))]

            #[test]
            fn phase_depends_only_on_spins(pa in unit(), pb in unit(), sa in spin_and_m(), sb in spin_and_m(),
                                           sign in prop::sample::select(vec![1, -1])) {
                prop_assume!(pa.cross(pb).norm() > 1e-3);
                let a = particle(pa, sa.0, sa.1);
                let b = particle(pb, sb.0, sb.1);
                let o = OrderedPairDesc::new(&a, &b, sign).unwrap();
                for builder in [Builder::Canonical, Builder::Helicity] {
                    let c = exchange_phase(builder, &o).unwrap();
                    prop_assert!((c - ComplexF::new(f64::from(o.expected_phase(builder)), 0.0)).norm() <= TAU);
                }
            }
        }
    }
}
