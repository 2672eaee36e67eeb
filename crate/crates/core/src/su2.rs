//! Rotations on the double cover: unit quaternions in which a 2π turn is
//! `-identity`, not the identity.
//!
//! Quaternion signs are never canonicalized. `q` and `-q` project to the same
//! 3×3 rotation but are different elements, and half-integer spin
//! representations tell them apart.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numerics::TAU;

/// A 3-vector of direction components.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vec3 = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    /// Unit vector along `self`, or `None` for a (numerically) zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 1e-300 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() <= TAU
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Polar and azimuthal angles, `θ ∈ [0, π]` and `φ ∈ [0, 2π)`.
    pub fn polar_angles(self) -> (f64, f64) {
        let theta = self.z.clamp(-1.0, 1.0).acos();
        let mut phi = self.y.atan2(self.x);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        (theta, phi)
    }

    pub fn from_polar(theta: f64, phi: f64) -> Vec3 {
        Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Row-major 3×3 real matrix.
pub type Mat3 = [[f64; 3]; 3];

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn mat3_apply(m: &Mat3, v: Vec3) -> Vec3 {
    let a = v.to_array();
    let r = |i: usize| m[i][0] * a[0] + m[i][1] * a[1] + m[i][2] * a[2];
    Vec3::new(r(0), r(1), r(2))
}

/// Frobenius norm of `a - b`.
pub fn mat3_distance(a: &Mat3, b: &Mat3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += (a[i][j] - b[i][j]).powi(2);
        }
    }
    s.sqrt()
}

pub const MAT3_IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// A unit quaternion `w + x i + y j + z k` on the double cover of SO(3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SU2Element {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SU2Element {
    pub const IDENTITY: SU2Element = SU2Element { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    /// The rotation by 2π about any axis.
    pub const DECK: SU2Element = SU2Element { w: -1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Builds an element from raw components, renormalizing to unit norm.
    /// The sign of the input is kept.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        SU2Element { w, x, y, z }.renormalized()
    }

    fn renormalized(self) -> Self {
        let n = (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        SU2Element { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    pub fn norm_deviation(&self) -> f64 {
        ((self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt() - 1.0).abs()
    }

    /// Largest componentwise difference; `q` and `-q` are far apart.
    pub fn distance(&self, o: &SU2Element) -> f64 {
        [self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z].iter().fold(0.0, |m, d| f64::max(m, d.abs()))
    }

    pub fn approx_eq(&self, o: &SU2Element, tol: f64) -> bool {
        self.distance(o) <= tol
    }

    /// Vector part `(x, y, z)`.
    pub fn vector(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Cayley-Klein parameters `(a, b)` of the 2×2 matrix `[[a, b], [-b*, a*]]`
    /// representing this element on spin-1/2 (rows/columns `m = +1/2, -1/2`).
    pub fn cayley_klein(&self) -> (crate::numerics::ComplexF, crate::numerics::ComplexF) {
        use crate::numerics::ComplexF;
        (ComplexF::new(self.w, -self.z), ComplexF::new(-self.y, -self.x))
    }
}

impl Neg for SU2Element {
    type Output = SU2Element;
    fn neg(self) -> SU2Element {
        SU2Element { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }
}

impl Mul for SU2Element {
    type Output = SU2Element;
    /// `self * rhs`: `rhs` acts first.
    fn mul(self, rhs: SU2Element) -> SU2Element {
        compose(self, rhs)
    }
}

impl fmt::Display for SU2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6}, {:.6})", self.w, self.x, self.y, self.z)
    }
}

/// Rotation by `angle` about the unit `axis`. Angles are kept modulo 4π, so
/// `angle` and `angle + 2π` give negated elements.
pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<SU2Element> {
    let n = axis.norm();
    if (n - 1.0).abs() > TAU {
        return Err(Error::NonUnitAxis(n));
    }
    Ok(axis_angle_unchecked(axis, angle))
}

pub(crate) fn axis_angle_unchecked(axis: Vec3, angle: f64) -> SU2Element {
    let (s, c) = (angle / 2.0).sin_cos();
    SU2Element { w: c, x: s * axis.x, y: s * axis.y, z: s * axis.z }
}

pub fn rot_x(angle: f64) -> SU2Element {
    axis_angle_unchecked(Vec3::X, angle)
}

pub fn rot_y(angle: f64) -> SU2Element {
    axis_angle_unchecked(Vec3::Y, angle)
}

pub fn rot_z(angle: f64) -> SU2Element {
    axis_angle_unchecked(Vec3::Z, angle)
}

/// Quaternion product `g2 · g1` (g1 applied first), renormalized.
pub fn compose(g2: SU2Element, g1: SU2Element) -> SU2Element {
    let (a, b, c, d) = (g2.w, g2.x, g2.y, g2.z);
    let (e, f, g, h) = (g1.w, g1.x, g1.y, g1.z);
    SU2Element {
        w: a * e - b * f - c * g - d * h,
        x: a * f + b * e + c * h - d * g,
        y: a * g - b * h + c * e + d * f,
        z: a * h + b * g - c * f + d * e,
    }
    .renormalized()
}

/// Composes a chain left to right as written: `compose_all([a, b, c]) = a·b·c`.
pub fn compose_all<I: IntoIterator<Item = SU2Element>>(items: I) -> SU2Element {
    items.into_iter().fold(SU2Element::IDENTITY, compose)
}

pub fn inverse(g: SU2Element) -> SU2Element {
    SU2Element { w: g.w, x: -g.x, y: -g.y, z: -g.z }
}

/// The 3×3 rotation matrix of `g` (active convention). Forgets the sheet.
pub fn project_so3(g: SU2Element) -> Mat3 {
    let SU2Element { w, x, y, z } = g;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Rotates `v` by `g`.
pub fn rotate(g: SU2Element, v: Vec3) -> Vec3 {
    mat3_apply(&project_so3(g), v)
}

/// `R_z(α) · R_y(β) · R_z(γ)`.
pub fn from_euler_zyz(alpha: f64, beta: f64, gamma: f64) -> SU2Element {
    compose(rot_z(alpha), compose(rot_y(beta), rot_z(gamma)))
}

/// One of the two lifts of an orthonormal right-handed matrix. Which one is
/// returned is a fixed function of the matrix; callers that care about the
/// sheet must track it themselves.
pub(crate) fn lift_rotation_matrix(m: &Mat3) -> SU2Element {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let q = if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        SU2Element { w: 0.25 * s, x: (m[2][1] - m[1][2]) / s, y: (m[0][2] - m[2][0]) / s, z: (m[1][0] - m[0][1]) / s }
    } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
        let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0;
        SU2Element { w: (m[2][1] - m[1][2]) / s, x: 0.25 * s, y: (m[0][1] + m[1][0]) / s, z: (m[0][2] + m[2][0]) / s }
    } else if m[1][1] > m[2][2] {
        let s = (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt() * 2.0;
        SU2Element { w: (m[0][2] - m[2][0]) / s, x: (m[0][1] + m[1][0]) / s, y: 0.25 * s, z: (m[1][2] + m[2][1]) / s }
    } else {
        let s = (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt() * 2.0;
        SU2Element { w: (m[1][0] - m[0][1]) / s, x: (m[0][2] + m[2][0]) / s, y: (m[1][2] + m[2][1]) / s, z: 0.25 * s }
    };
    q.renormalized()
}
