//! Per-particle frames for a pair of directions and the half-turn relating
//! them.
//!
//! Both constructions are symmetric in the two particles. The relating
//! rotation is not: `R_k(+π)` one way is `R_k(-π)` the other way, and those
//! are different elements of the double cover.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::su2::{axis_angle_unchecked, compose, inverse, lift_rotation_matrix, rot_y, rotate, Mat3, SU2Element, Vec3};

/// Below this, two directions count as collinear or antiparallel.
pub const DEGENERACY_EPS: f64 = 1e-8;

/// A right-handed orthonormal triad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub x: Vec3,
    pub y: Vec3,
    pub z: Vec3,
}

impl Frame {
    pub const LAB: Frame = Frame { x: Vec3::X, y: Vec3::Y, z: Vec3::Z };

    /// Frame with the given `y` and `z`; `x = y × z`.
    pub fn from_yz(y: Vec3, z: Vec3) -> Frame {
        Frame { x: y.cross(z), y, z }
    }

    /// The rotation matrix whose columns are the frame axes.
    pub fn matrix(&self) -> Mat3 {
        let (x, y, z) = (self.x, self.y, self.z);
        [[x.x, y.x, z.x], [x.y, y.y, z.y], [x.z, y.z, z.z]]
    }

    /// Largest deviation from orthonormality and right-handedness.
    pub fn defect(&self) -> f64 {
        let (x, y, z) = (self.x, self.y, self.z);
        [
            (x.norm() - 1.0).abs(),
            (y.norm() - 1.0).abs(),
            (z.norm() - 1.0).abs(),
            x.dot(y).abs(),
            y.dot(z).abs(),
            z.dot(x).abs(),
            x.cross(y).distance(z),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn rotated(&self, g: SU2Element) -> Frame {
        Frame { x: rotate(g, self.x), y: rotate(g, self.y), z: rotate(g, self.z) }
    }

    /// Largest axis distance to `o`.
    pub fn distance(&self, o: &Frame) -> f64 {
        self.x.distance(o.x).max(self.y.distance(o.y)).max(self.z.distance(o.z))
    }

    /// One of the two double-cover elements carrying the lab triad onto this
    /// frame.
    pub fn lift(&self) -> SU2Element {
        lift_rotation_matrix(&self.matrix())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    Parallel,
    Bisecting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    AToB,
    BToA,
}

/// Options for building a frame pair.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FrameOptions {
    /// The `y` axis of particle a when the directions are collinear.
    pub seed: Option<Vec3>,
    /// Use `R_k(-π)` instead of `R_k(+π)` for `r_ab`.
    pub flip: bool,
}

/// The two frames of a pair together with the relating half-turns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramePair {
    pub frame_a: Frame,
    pub frame_b: Frame,
    pub k: Vec3,
    pub r_ab: SU2Element,
    pub r_ba: SU2Element,
    pub kind: FrameKind,
    /// Double-cover element taking the lab triad to `frame_a`.
    pub lift_a: SU2Element,
    /// `r_ab · lift_a`, taking the lab triad to `frame_b`.
    pub lift_b: SU2Element,
}

impl FramePair {
    /// The same pair with the particle labels exchanged. Rebuilding from the
    /// swapped inputs gives the same frames but an `r_ab` differing from this
    /// one by the 2π element, since the half-turn sign is tied to input order.
    pub fn swapped(&self) -> FramePair {
        FramePair {
            frame_a: self.frame_b,
            frame_b: self.frame_a,
            k: self.k,
            r_ab: self.r_ba,
            r_ba: self.r_ab,
            kind: self.kind,
            lift_a: self.lift_b,
            lift_b: compose(self.r_ba, self.lift_b),
        }
    }
}

fn require_unit(v: Vec3) -> Result<()> {
    if v.is_unit() {
        Ok(())
    } else {
        Err(Error::NonUnitAxis(v.norm()))
    }
}

/// Unit vector along `v_a + v_b`.
pub fn bisecting_axis(v_a: Vec3, v_b: Vec3) -> Result<Vec3> {
    require_unit(v_a)?;
    require_unit(v_b)?;
    let sum = v_a + v_b;
    if sum.norm() < DEGENERACY_EPS {
        return Err(Error::DegenerateAntiparallel);
    }
    Ok(sum.scale(1.0 / sum.norm()))
}

/// Half the angle between the two directions, in `[0, π/2]`.
pub fn half_angle(v_a: Vec3, v_b: Vec3) -> f64 {
    v_a.dot(v_b).clamp(-1.0, 1.0).acos() / 2.0
}

/// `(y_a, k)` for the pair, using the seed for collinear directions.
fn y_and_k(v_a: Vec3, v_b: Vec3, seed: Option<Vec3>) -> Result<(Vec3, Vec3)> {
    require_unit(v_a)?;
    require_unit(v_b)?;
    let cross = v_a.cross(v_b);
    if cross.norm() >= DEGENERACY_EPS {
        let y = cross.scale(1.0 / cross.norm());
        return Ok((y, bisecting_axis(v_a, v_b)?));
    }
    let seed = seed.ok_or(Error::DegenerateCollinear)?;
    let y = (seed - v_a.scale(seed.dot(v_a)))
        .normalized()
        .filter(|y| y.norm() > 0.5)
        .ok_or_else(|| Error::InvalidArgument("seed axis is parallel to the direction".into()))?;
    let k = if v_a.dot(v_b) > 0.0 {
        (v_a + v_b).normalized().unwrap_or(v_a)
    } else {
        // the half-turn must reverse both v_a and y_a
        y.cross(v_a)
    };
    Ok((y, k))
}

fn assemble(frame_a: Frame, frame_b: Frame, k: Vec3, kind: FrameKind, flip: bool) -> FramePair {
    let r_ab = axis_angle_unchecked(k, if flip { -PI } else { PI });
    let lift_a = frame_a.lift();
    FramePair { frame_a, frame_b, k, r_ab, r_ba: inverse(r_ab), kind, lift_a, lift_b: compose(r_ab, lift_a) }
}

/// Frames with `z` along each particle's own direction and `y_c = v_c × v_o`.
pub fn parallel_frames(v_a: Vec3, v_b: Vec3) -> Result<FramePair> {
    parallel_frames_with(v_a, v_b, FrameOptions::default())
}

pub fn parallel_frames_with(v_a: Vec3, v_b: Vec3, opts: FrameOptions) -> Result<FramePair> {
    let (y, k) = y_and_k(v_a, v_b, opts.seed)?;
    let frame_a = Frame::from_yz(y, v_a);
    let frame_b = Frame::from_yz(-y, v_b);
    Ok(assemble(frame_a, frame_b, k, FrameKind::Parallel, opts.flip))
}

/// Frames sharing `z = k` with `y_a = -y_b`.
pub fn bisecting_frames(v_a: Vec3, v_b: Vec3) -> Result<FramePair> {
    bisecting_frames_with(v_a, v_b, FrameOptions::default())
}

pub fn bisecting_frames_with(v_a: Vec3, v_b: Vec3, opts: FrameOptions) -> Result<FramePair> {
    let (y, k) = y_and_k(v_a, v_b, opts.seed)?;
    let frame_a = Frame::from_yz(y, k);
    let frame_b = Frame::from_yz(-y, k);
    Ok(assemble(frame_a, frame_b, k, FrameKind::Bisecting, opts.flip))
}

/// Body rotation taking each parallel frame onto the matching bisecting
/// frame: `R_y(θ)` about the frame's own `y` axis, the same for both.
pub fn parallel_to_bisecting(v_a: Vec3, v_b: Vec3) -> SU2Element {
    rot_y(half_angle(v_a, v_b))
}

pub fn relating_rotation(pair: &FramePair, direction: Direction) -> SU2Element {
    match direction {
        Direction::AToB => pair.r_ab,
        Direction::BToA => pair.r_ba,
    }
}

/// True when `g` carries `from` onto `to` within `tol`.
pub fn maps_frame(g: SU2Element, from: &Frame, to: &Frame, tol: f64) -> bool {
    from.rotated(g).distance(to) <= tol
}
