//! Single-particle spin states carried with an explicit base frame and the
//! double-cover rotation from that base frame into the quantization frame.

use crate::error::{Error, Result};
use crate::geometry::FramePair;
use crate::numerics::{ComplexF, HalfInt};
use crate::su2::{compose, rot_y, rot_z, SU2Element, Vec3};
use crate::wigner::big_d;

/// Which frame a state's rotation is measured from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    Helicity,
    Bisecting,
    Canonical,
}

/// Everything that labels a single-particle spin state.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticleDesc {
    /// Remaining intrinsic quantum numbers, compared as an exact string.
    pub q: String,
    pub p_dir: Vec3,
    /// Carried as a label only.
    pub p_mag: f64,
    pub s: HalfInt,
    pub m: HalfInt,
    pub base: BaseKind,
    /// Double-cover element taking the lab triad to the base frame.
    /// Identity for the canonical base.
    pub base_lift: SU2Element,
    /// Rotation from the base frame into the spin-quantization frame.
    pub r_bs: SU2Element,
    /// The frame pair the base frame was taken from, if any.
    pub frames: Option<FramePair>,
}

pub(crate) fn check_projection(s: HalfInt, m: HalfInt) -> Result<()> {
    if s.twice() < 0 || s.index_of(m).is_none() {
        return Err(Error::InvalidSpinProjection { s: s.to_string(), m: m.to_string() });
    }
    Ok(())
}

impl ParticleDesc {
    /// A state quantized along the canonical axes.
    pub fn new(q: impl Into<String>, p_dir: Vec3, p_mag: f64, s: HalfInt, m: HalfInt) -> Result<Self> {
        check_projection(s, m)?;
        if !p_dir.is_unit() {
            return Err(Error::NonUnitAxis(p_dir.norm()));
        }
        if !(p_mag >= 0.0 && p_mag.is_finite()) {
            return Err(Error::InvalidArgument(format!("momentum magnitude {p_mag}")));
        }
        Ok(ParticleDesc {
            q: q.into(),
            p_dir,
            p_mag,
            s,
            m,
            base: BaseKind::Canonical,
            base_lift: SU2Element::IDENTITY,
            r_bs: SU2Element::IDENTITY,
            frames: None,
        })
    }

    pub fn with_base(mut self, base: BaseKind, base_lift: SU2Element, frames: Option<FramePair>) -> Self {
        self.base = base;
        self.base_lift = base_lift;
        self.frames = frames;
        self
    }

    pub fn with_rotation(mut self, r_bs: SU2Element) -> Self {
        self.r_bs = r_bs;
        self
    }

    pub fn with_m(mut self, m: HalfInt) -> Result<Self> {
        check_projection(self.s, m)?;
        self.m = m;
        Ok(self)
    }

    /// Same particle labels (Q, p, s), ignoring projection and frames.
    pub fn same_particle(&self, o: &ParticleDesc) -> bool {
        self.q == o.q && self.s == o.s && self.p_mag == o.p_mag && self.p_dir == o.p_dir
    }

    /// Lab-frame element of the quantization frame: `base_lift · r_bs`.
    pub fn quantization_lift(&self) -> SU2Element {
        compose(self.base_lift, self.r_bs)
    }
}

/// Spin amplitudes over the fiducial basis, `m` descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinKet {
    pub s: HalfInt,
    pub amps: Vec<ComplexF>,
}

impl SpinKet {
    pub fn basis(s: HalfInt, m: HalfInt) -> Result<Self> {
        check_projection(s, m)?;
        let mut amps = vec![ComplexF::new(0.0, 0.0); s.multiplicity()];
        amps[s.index_of(m).expect("checked")] = ComplexF::new(1.0, 0.0);
        Ok(SpinKet { s, amps })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|o>`.
    pub fn inner(&self, o: &SpinKet) -> ComplexF {
        self.amps.iter().zip(&o.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scaled(&self, c: ComplexF) -> SpinKet {
        SpinKet { s: self.s, amps: self.amps.iter().map(|a| a * c).collect() }
    }

    pub fn max_diff(&self, o: &SpinKet) -> f64 {
        crate::numerics::max_abs_diff(&self.amps, &o.amps)
    }
}

fn rotated_basis(s: HalfInt, m: HalfInt, g: SU2Element) -> Result<SpinKet> {
    check_projection(s, m)?;
    let col = s.index_of(m).expect("checked");
    Ok(SpinKet { s, amps: big_d(s, g).column(col) })
}

/// Column `m` of `D^s(r_bs)`, in the base frame's fiducial basis.
pub fn make_ket(d: &ParticleDesc) -> Result<SpinKet> {
    rotated_basis(d.s, d.m, d.r_bs)
}

/// The same state expressed in the lab fiducial basis.
pub fn lab_ket(d: &ParticleDesc) -> Result<SpinKet> {
    rotated_basis(d.s, d.m, d.quantization_lift())
}

/// `D^s(g) · amps`.
pub fn rotate_frame(ket: &SpinKet, g: SU2Element) -> SpinKet {
    SpinKet { s: ket.s, amps: big_d(ket.s, g).apply(&ket.amps) }
}

/// The normal-range rotation carrying `ẑ` onto `p`: `R_z(φ)·R_y(θ)` with
/// `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
pub fn canonical_to_helicity(p_dir: Vec3) -> SU2Element {
    let (theta, phi) = p_dir.polar_angles();
    extended_angle_lift(theta, phi)
}

/// Amplitudes of the helicity-`λ` state of direction `p` over the canonical
/// projections `m`: `D^s_{mλ}(R_z(φ)R_y(θ))`, the complex conjugate of the
/// coefficient expanding a canonical state over helicity states.
pub fn helicity_to_canonical(s: HalfInt, lambda: HalfInt, p_dir: Vec3) -> Result<SpinKet> {
    if !p_dir.is_unit() {
        return Err(Error::NonUnitAxis(p_dir.norm()));
    }
    rotated_basis(s, lambda, canonical_to_helicity(p_dir))
}

/// `R_z(φ)·R_y(θ)` for angles in the extended range. `φ` and `φ + 2π` give
/// negated elements.
pub fn extended_angle_lift(theta: f64, phi: f64) -> SU2Element {
    compose(rot_z(phi), rot_y(theta))
}

/// The spin part of a single-valued coordinate-space wave function at
/// extended angles.
pub fn extended_angle_ket(s: HalfInt, m: HalfInt, theta: f64, phi: f64) -> Result<SpinKet> {
    rotated_basis(s, m, extended_angle_lift(theta, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{halfint_phase, TAU};
    use crate::su2::{from_axis_angle, from_euler_zyz};
    use crate::wigner::little_d;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn desc(ts: i32, tm: i32) -> ParticleDesc {
        ParticleDesc::new("e", Vec3::Z, 1.0, h(ts), h(tm)).unwrap()
    }

    #[test]
    fn make_ket_examples() {
        let d = desc(3, 1);
        assert_eq!(make_ket(&d).unwrap(), SpinKet::basis(h(3), h(1)).unwrap());

        let d = desc(1, 1).with_rotation(SU2Element::DECK);
        let k = make_ket(&d).unwrap();
        assert!(k.max_diff(&SpinKet::basis(h(1), h(1)).unwrap().scaled(ComplexF::new(-1.0, 0.0))) < 1e-15);

        let gamma = 0.77;
        for tm in [-3, -1, 1, 3] {
            let d = desc(3, tm).with_rotation(from_axis_angle(Vec3::Z, gamma).unwrap());
            let expected =
                SpinKet::basis(h(3), h(tm)).unwrap().scaled(ComplexF::from_polar(1.0, -h(tm).to_f64() * gamma));
            assert!(make_ket(&d).unwrap().max_diff(&expected) < 1e-14);
        }
    }

    #[test]
    fn invalid_projection_rejected() {
        assert!(matches!(ParticleDesc::new("e", Vec3::Z, 1.0, h(1), h(3)), Err(Error::InvalidSpinProjection { .. })));
        assert!(matches!(ParticleDesc::new("e", Vec3::Z, 1.0, h(2), h(1)), Err(Error::InvalidSpinProjection { .. })));
    }

    #[test]
    fn rotate_frame_examples() {
        let k = make_ket(&desc(3, -1).with_rotation(from_euler_zyz(0.3, 1.0, 2.0))).unwrap();
        assert!(rotate_frame(&k, SU2Element::IDENTITY).max_diff(&k) < 1e-15);
        assert!(rotate_frame(&k, SU2Element::DECK).max_diff(&k.scaled(ComplexF::new(-1.0, 0.0))) < 1e-15);
        let (g1, g2) = (from_euler_zyz(1.0, 2.0, 3.0), from_euler_zyz(-0.5, 0.4, 5.0));
        let twice = rotate_frame(&rotate_frame(&k, g1), g2);
        assert!(twice.max_diff(&rotate_frame(&k, compose(g2, g1))) < 1e-13);
    }

    #[test]
    fn helicity_to_canonical_examples() {
        for ts in 0..=4 {
            for tl in (-ts..=ts).step_by(2) {
                let c = helicity_to_canonical(h(ts), h(tl), Vec3::Z).unwrap();
                assert!(c.max_diff(&SpinKet::basis(h(ts), h(tl)).unwrap()) < 1e-15);
            }
        }
        let c = helicity_to_canonical(HalfInt::HALF, HalfInt::HALF, Vec3::X).unwrap();
        let d = little_d(HalfInt::HALF, FRAC_PI_2);
        assert!((c.amps[0].re - d[0][0]).abs() < 1e-15 && (c.amps[1].re - d[1][0]).abs() < 1e-15);
        assert!((c.amps[0].re - FRAC_PI_4.cos()).abs() < 1e-15);
        assert!((c.amps[1].re - FRAC_PI_4.sin()).abs() < 1e-15);
        let p = Vec3::new(0.2, -0.4, 0.7).normalized().unwrap();
        for tl in [-3, -1, 1, 3] {
            assert!((helicity_to_canonical(h(3), h(tl), p).unwrap().norm() - 1.0).abs() < TAU);
        }
    }

    #[test]
    fn helicity_state_is_quantized_along_p() {
        // <λ| J·p |λ> = λ, checked for spin 1/2 via the Pauli vector
        let p = Vec3::new(-0.3, 0.5, 0.1).normalized().unwrap();
        let c = helicity_to_canonical(HalfInt::HALF, HalfInt::HALF, p).unwrap();
        let (u, d) = (c.amps[0], c.amps[1]);
        let sx = (u.conj() * d + d.conj() * u).re;
        let sy = (u.conj() * d * ComplexF::new(0.0, -1.0) + d.conj() * u * ComplexF::new(0.0, 1.0)).re;
        let sz = u.norm_sqr() - d.norm_sqr();
        assert!(Vec3::new(sx, sy, sz).distance(p) < 1e-14);
    }

    #[test]
    fn extended_angle_examples() {
        assert!(extended_angle_lift(0.0, 0.0).approx_eq(&SU2Element::IDENTITY, 0.0));
        assert!(extended_angle_lift(0.0, 2.0 * PI).approx_eq(&SU2Element::DECK, 1e-15));
        let (theta, phi) = (0.8, 1.9);
        let a = extended_angle_ket(HalfInt::HALF, HalfInt::HALF, theta, phi).unwrap();
        let b = extended_angle_ket(HalfInt::HALF, HalfInt::HALF, theta, phi + 2.0 * PI).unwrap();
        assert!(b.max_diff(&a.scaled(ComplexF::new(-1.0, 0.0))) < 1e-14);
    }

    #[test]
    fn lab_ket_folds_in_the_base_frame() {
        let base = from_euler_zyz(0.4, 1.3, -0.2);
        let r = from_euler_zyz(1.0, 0.5, 0.1);
        let d = desc(2, 0).with_base(BaseKind::Helicity, base, None).with_rotation(r);
        let expected = rotate_frame(&make_ket(&d).unwrap(), base);
        assert!(lab_ket(&d).unwrap().max_diff(&expected) < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn element() -> impl Strategy<Value = SU2Element> {
            (-7.0f64..7.0, -7.0f64..7.0, -7.0f64..7.0).prop_map(|(a, b, c)| from_euler_zyz(a, b, c))
        }

        proptest! {
            #[test]
            fn single_valued(g in element(), ts in 0i32..=5, k in 0i32..=5) {
                prop_assume!(k <= ts);
                let d = desc(ts, ts - 2 * k).with_rotation(g);
                let twin = d.clone();
                prop_assert_eq!(make_ket(&d).unwrap(), make_ket(&twin).unwrap());
            }

            #[test]
            fn deck_is_visible_for_half_integer_spin(g in element(), ts in 0i32..=5, k in 0i32..=5) {
                prop_assume!(k <= ts);
                let d = desc(ts, ts - 2 * k);
                let plus = make_ket(&d.clone().with_rotation(g)).unwrap();
                let minus = make_ket(&d.with_rotation(-g)).unwrap();
                let sign = f64::from(halfint_phase(h(ts)));
                prop_assert!(minus.max_diff(&plus.scaled(ComplexF::new(sign, 0.0))) <= TAU);
            }

            #[test]
            fn rotation_keeps_the_norm(g1 in element(), g2 in element(), ts in 0i32..=5) {
                let k = make_ket(&desc(ts, ts).with_rotation(g1)).unwrap();
                prop_assert!((rotate_frame(&k, g2).norm() - 1.0).abs() <= 1e-10);
            }
        }
    }
}
