//! Fixed-dimension (3D) tensor arithmetic: orders 1-3, symmetry and trace
//! structure, SO(3) actions, and Levi-Civita machinery.
//!
//! Symmetric, traceless, and skew types store only their independent
//! components; the full representing array is always a derived view.

use crate::error::Error;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::ops::{Add, Mul, Neg, Sub};

/// Orthogonality / determinant tolerance for [`Rotation::from_matrix`].
pub const ROTATION_TOL: f64 = 1e-12;

/// Levi-Civita symbol with 1-based indices, as a plain integer.
///
/// Panics if any index is outside `1..=3`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    assert!(
        (1..=3).contains(&i) && (1..=3).contains(&j) && (1..=3).contains(&k),
        "levi_civita indices must lie in 1..=3, got ({i},{j},{k})"
    );
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (1, 3, 2) | (2, 1, 3) | (3, 2, 1) => -1,
        _ => 0,
    }
}

/// Levi-Civita symbol with 0-based indices, as a float. Internal workhorse.
#[inline]
pub(crate) const fn eps0(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[inline]
pub(crate) const fn kron(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------------
// Vec3
// ---------------------------------------------------------------------------

/// A vector in the three-dimensional physical space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn basis(axis: usize) -> Self {
        let mut v = [0.0; 3];
        v[axis] = 1.0;
        Vec3(v)
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let a = &self.0;
        let b = &other.0;
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn normalized(&self) -> Vec3 {
        self.scale(1.0 / self.norm())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

// ---------------------------------------------------------------------------
// Mat3
// ---------------------------------------------------------------------------

/// A general (not necessarily symmetric) 3x3 matrix, row major.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub fn identity() -> Mat3 {
        Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Mat3 {
        Mat3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn outer(a: &Vec3, b: &Vec3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a.0[i] * b.0[j];
            }
        }
        Mat3(m)
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let m = &self.0;
        Vec3([
            m[0][0] * v.0[0] + m[0][1] * v.0[1] + m[0][2] * v.0[2],
            m[1][0] * v.0[0] + m[1][1] * v.0[1] + m[1][2] * v.0[2],
            m[2][0] * v.0[0] + m[2][1] * v.0[1] + m[2][2] * v.0[2],
        ])
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        let mut m = self.0;
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        Mat3(m)
    }

    pub fn norm(&self) -> f64 {
        let mut s = 0.0;
        for row in &self.0 {
            for e in row {
                s += e * e;
            }
        }
        s.sqrt()
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        let mut m = self.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += rhs.0[i][j];
            }
        }
        Mat3(m)
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        let mut m = self.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] -= rhs.0[i][j];
            }
        }
        Mat3(m)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for (k, row) in rhs.0.iter().enumerate() {
                    s += self.0[i][k] * row[j];
                }
                m[i][j] = s;
            }
        }
        Mat3(m)
    }
}

// ---------------------------------------------------------------------------
// SymMat3 / Harm2 / SkewMat3
// ---------------------------------------------------------------------------

/// A symmetric 3x3 matrix stored by its six independent entries in the
/// order (11, 22, 33, 23, 13, 12).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymMat3 {
    entries: [f64; 6],
}

impl SymMat3 {
    pub const ZERO: SymMat3 = SymMat3 { entries: [0.0; 6] };

    pub fn new(entries: [f64; 6]) -> Self {
        SymMat3 { entries }
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        SymMat3 {
            entries: [a, b, c, 0.0, 0.0, 0.0],
        }
    }

    pub fn identity() -> Self {
        SymMat3::diag(1.0, 1.0, 1.0)
    }

    /// Symmetric part of a general matrix.
    pub fn from_mat(m: &Mat3) -> Self {
        let m = &m.0;
        SymMat3 {
            entries: [
                m[0][0],
                m[1][1],
                m[2][2],
                0.5 * (m[1][2] + m[2][1]),
                0.5 * (m[0][2] + m[2][0]),
                0.5 * (m[0][1] + m[1][0]),
            ],
        }
    }

    pub fn to_mat(&self) -> Mat3 {
        let [m11, m22, m33, m23, m13, m12] = self.entries;
        Mat3([[m11, m12, m13], [m12, m22, m23], [m13, m23, m33]])
    }

    pub fn entries(&self) -> [f64; 6] {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.to_mat().0[i][j]
    }

    pub fn trace(&self) -> f64 {
        self.entries[0] + self.entries[1] + self.entries[2]
    }

    pub fn norm(&self) -> f64 {
        self.to_mat().norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut e = self.entries;
        for x in e.iter_mut() {
            *x *= s;
        }
        SymMat3 { entries: e }
    }
}

/// A symmetric traceless 3x3 matrix stored by five independent entries
/// (11, 22, 23, 13, 12); the 33 entry is derived as -(11 + 22).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Harm2 {
    entries: [f64; 5],
}

impl Harm2 {
    pub const ZERO: Harm2 = Harm2 { entries: [0.0; 5] };

    pub fn new(entries: [f64; 5]) -> Self {
        Harm2 { entries }
    }

    /// The pattern d0 = diag(-2, 1, 1), invariant under rotations that fix
    /// the 1-axis.
    pub fn d0() -> Self {
        Harm2 {
            entries: [-2.0, 1.0, 0.0, 0.0, 0.0],
        }
    }

    /// Deviatoric part of the symmetric part of `m`.
    pub fn from_mat_deviatoric(m: &Mat3) -> Self {
        let s = SymMat3::from_mat(m);
        let t = s.trace() / 3.0;
        let e = s.entries();
        Harm2 {
            entries: [e[0] - t, e[1] - t, e[3], e[4], e[5]],
        }
    }

    /// Reads the five stored slots of an (assumed traceless symmetric)
    /// matrix without projecting.
    pub fn from_mat_unchecked(m: &Mat3) -> Self {
        Harm2 {
            entries: [m.0[0][0], m.0[1][1], m.0[1][2], m.0[0][2], m.0[0][1]],
        }
    }

    pub fn to_mat(&self) -> Mat3 {
        let [m11, m22, m23, m13, m12] = self.entries;
        Mat3([
            [m11, m12, m13],
            [m12, m22, m23],
            [m13, m23, -m11 - m22],
        ])
    }

    pub fn entries(&self) -> [f64; 5] {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.to_mat().norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut e = self.entries;
        for x in e.iter_mut() {
            *x *= s;
        }
        Harm2 { entries: e }
    }
}

impl Add for Harm2 {
    type Output = Harm2;
    fn add(self, rhs: Harm2) -> Harm2 {
        let mut e = self.entries;
        for (x, y) in e.iter_mut().zip(rhs.entries.iter()) {
            *x += y;
        }
        Harm2 { entries: e }
    }
}

/// A skew-symmetric 3x3 matrix stored by its entries (23, 13, 12).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SkewMat3 {
    entries: [f64; 3],
}

impl SkewMat3 {
    pub fn new(w23: f64, w13: f64, w12: f64) -> Self {
        SkewMat3 {
            entries: [w23, w13, w12],
        }
    }

    pub fn to_mat(&self) -> Mat3 {
        let [w23, w13, w12] = self.entries;
        Mat3([
            [0.0, w12, w13],
            [-w12, 0.0, w23],
            [-w13, -w23, 0.0],
        ])
    }

    pub fn entries(&self) -> [f64; 3] {
        self.entries
    }
}

// ---------------------------------------------------------------------------
// Tensor3 / PiezoTensor / Harm3
// ---------------------------------------------------------------------------

/// A general third-order tensor as a full 27-entry array.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tensor3(pub [[[f64; 3]; 3]; 3]);

impl Tensor3 {
    pub const ZERO: Tensor3 = Tensor3([[[0.0; 3]; 3]; 3]);

    pub fn norm(&self) -> f64 {
        let mut s = 0.0;
        for a in &self.0 {
            for b in a {
                for c in b {
                    s += c * c;
                }
            }
        }
        s.sqrt()
    }

    pub fn scale(&self, s: f64) -> Tensor3 {
        let mut t = self.0;
        for a in t.iter_mut() {
            for b in a.iter_mut() {
                for c in b.iter_mut() {
                    *c *= s;
                }
            }
        }
        Tensor3(t)
    }

    pub fn dot(&self, other: &Tensor3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s += self.0[i][j][k] * other.0[i][j][k];
                }
            }
        }
        s
    }
}

impl Add for Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: Tensor3) -> Tensor3 {
        let mut t = self.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    t[i][j][k] += rhs.0[i][j][k];
                }
            }
        }
        Tensor3(t)
    }
}

impl Sub for Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: Tensor3) -> Tensor3 {
        let mut t = self.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    t[i][j][k] -= rhs.0[i][j][k];
                }
            }
        }
        Tensor3(t)
    }
}

/// Column order of the compact 3x6 storage: pairs (jk) = 11, 22, 33, 23, 13, 12.
pub const PAIR_COLUMNS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

/// A piezoelectric tensor: third order, symmetric in the last two indices,
/// stored as a 3x6 array with columns (jk) = 11, 22, 33, 23, 13, 12.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PiezoTensor {
    rows: [[f64; 6]; 3],
}

impl PiezoTensor {
    pub const ZERO: PiezoTensor = PiezoTensor { rows: [[0.0; 6]; 3] };

    pub fn new(rows: [[f64; 6]; 3]) -> Self {
        PiezoTensor { rows }
    }

    /// Builds from a full array, averaging the (jk) pair. Asymmetry beyond
    /// roundoff in the source should be rejected by the caller; see
    /// [`PiezoTensor::try_from_tensor3`].
    pub fn from_tensor3(t: &Tensor3) -> Self {
        let mut rows = [[0.0; 6]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for (col, &(j, k)) in PAIR_COLUMNS.iter().enumerate() {
                row[col] = 0.5 * (t.0[i][j][k] + t.0[i][k][j]);
            }
        }
        PiezoTensor { rows }
    }

    /// Builds from a full array, rejecting asymmetry in the last two
    /// indices beyond `tol` (absolute, on the given entries).
    pub fn try_from_tensor3(t: &Tensor3, tol: f64) -> Result<Self, Error> {
        for i in 0..3 {
            for j in 0..3 {
                for k in (j + 1)..3 {
                    let dev = (t.0[i][j][k] - t.0[i][k][j]).abs();
                    if dev > tol {
                        return Err(Error::NotPiezoSymmetric {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            deviation: dev,
                        });
                    }
                }
            }
        }
        Ok(Self::from_tensor3(t))
    }

    pub fn to_tensor3(&self) -> Tensor3 {
        let mut t = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for (col, &(j, k)) in PAIR_COLUMNS.iter().enumerate() {
                t[i][j][k] = self.rows[i][col];
                t[i][k][j] = self.rows[i][col];
            }
        }
        Tensor3(t)
    }

    pub fn rows(&self) -> [[f64; 6]; 3] {
        self.rows
    }

    pub fn component(&self, i: usize, j: usize, k: usize) -> f64 {
        self.to_tensor3().0[i][j][k]
    }

    /// The 18 components in row-major compact order:
    /// P111, P122, P133, P123, P113, P112, P211, ... P312.
    pub fn to_flat(&self) -> [f64; 18] {
        let mut out = [0.0; 18];
        for i in 0..3 {
            out[6 * i..6 * (i + 1)].copy_from_slice(&self.rows[i]);
        }
        out
    }

    pub fn from_flat(flat: &[f64; 18]) -> Self {
        let mut rows = [[0.0; 6]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            row.copy_from_slice(&flat[6 * i..6 * (i + 1)]);
        }
        PiezoTensor { rows }
    }

    pub fn norm(&self) -> f64 {
        self.to_tensor3().norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut rows = self.rows;
        for row in rows.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        PiezoTensor { rows }
    }
}

impl Add for PiezoTensor {
    type Output = PiezoTensor;
    fn add(self, rhs: PiezoTensor) -> PiezoTensor {
        let mut rows = self.rows;
        for i in 0..3 {
            for j in 0..6 {
                rows[i][j] += rhs.rows[i][j];
            }
        }
        PiezoTensor { rows }
    }
}

impl Sub for PiezoTensor {
    type Output = PiezoTensor;
    fn sub(self, rhs: PiezoTensor) -> PiezoTensor {
        let mut rows = self.rows;
        for i in 0..3 {
            for j in 0..6 {
                rows[i][j] -= rhs.rows[i][j];
            }
        }
        PiezoTensor { rows }
    }
}

/// A third-order totally symmetric traceless (harmonic) tensor, stored by
/// its seven independent components (111, 122, 112, 222, 113, 223, 123).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Harm3 {
    comps: [f64; 7],
}

impl Harm3 {
    pub const ZERO: Harm3 = Harm3 { comps: [0.0; 7] };

    pub fn new(comps: [f64; 7]) -> Self {
        Harm3 { comps }
    }

    /// The pattern d1(alpha, beta, gamma): the harmonic tensor with
    /// components A111 = -2 gamma, A122 = gamma, A222 = alpha, A223 = beta
    /// and all remaining independent components zero. A rotation by theta
    /// about the 1-axis maps (alpha, beta) to a rotation by 3 theta on its
    /// circle while gamma is fixed.
    pub fn d1(alpha: f64, beta: f64, gamma: f64) -> Self {
        Harm3 {
            comps: [-2.0 * gamma, gamma, 0.0, alpha, 0.0, beta, 0.0],
        }
    }

    pub fn comps(&self) -> [f64; 7] {
        self.comps
    }

    pub fn a111(&self) -> f64 {
        self.comps[0]
    }
    pub fn a122(&self) -> f64 {
        self.comps[1]
    }
    pub fn a112(&self) -> f64 {
        self.comps[2]
    }
    pub fn a222(&self) -> f64 {
        self.comps[3]
    }
    pub fn a113(&self) -> f64 {
        self.comps[4]
    }
    pub fn a223(&self) -> f64 {
        self.comps[5]
    }
    pub fn a123(&self) -> f64 {
        self.comps[6]
    }

    /// Full expansion; totally symmetric with vanishing single traces by
    /// construction.
    pub fn to_tensor3(&self) -> Tensor3 {
        let [a111, a122, a112, a222, a113, a223, a123] = self.comps;
        let a133 = -a111 - a122;
        let a233 = -a112 - a222;
        let a333 = -a113 - a223;
        let mut t = [[[0.0; 3]; 3]; 3];
        let mut put = |i: usize, j: usize, k: usize, v: f64| {
            t[i][j][k] = v;
            t[i][k][j] = v;
            t[j][i][k] = v;
            t[j][k][i] = v;
            t[k][i][j] = v;
            t[k][j][i] = v;
        };
        put(0, 0, 0, a111);
        put(0, 1, 1, a122);
        put(0, 0, 1, a112);
        put(1, 1, 1, a222);
        put(0, 0, 2, a113);
        put(1, 1, 2, a223);
        put(0, 1, 2, a123);
        put(0, 2, 2, a133);
        put(1, 2, 2, a233);
        put(2, 2, 2, a333);
        Tensor3(t)
    }

    /// Reads the seven component slots of a full array assumed harmonic.
    pub fn from_tensor3_unchecked(t: &Tensor3) -> Self {
        let a = &t.0;
        Harm3 {
            comps: [
                a[0][0][0], a[0][1][1], a[0][0][1], a[1][1][1], a[0][0][2], a[1][1][2], a[0][1][2],
            ],
        }
    }

    pub fn norm(&self) -> f64 {
        self.to_tensor3().norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.comps;
        for x in c.iter_mut() {
            *x *= s;
        }
        Harm3 { comps: c }
    }

    /// The cubic form f(x) = A_ijk x_i x_j x_k.
    pub fn cubic_form(&self, x: &Vec3) -> f64 {
        let t = self.to_tensor3();
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s += t.0[i][j][k] * x.0[i] * x.0[j] * x.0[k];
                }
            }
        }
        s
    }

    /// The vector (A x x)_i = A_ijk x_j x_k.
    pub fn apply_twice(&self, x: &Vec3) -> Vec3 {
        let t = self.to_tensor3();
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..3 {
                for k in 0..3 {
                    *o += t.0[i][j][k] * x.0[j] * x.0[k];
                }
            }
        }
        Vec3(out)
    }
}

impl Add for Harm3 {
    type Output = Harm3;
    fn add(self, rhs: Harm3) -> Harm3 {
        let mut c = self.comps;
        for (x, y) in c.iter_mut().zip(rhs.comps.iter()) {
            *x += y;
        }
        Harm3 { comps: c }
    }
}

// ---------------------------------------------------------------------------
// Rotation
// ---------------------------------------------------------------------------

/// A proper rotation of the three-dimensional physical space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(Mat3);

impl Rotation {
    pub fn identity() -> Rotation {
        Rotation(Mat3::identity())
    }

    /// Validates orthogonality and det = +1 within [`ROTATION_TOL`].
    pub fn from_matrix(m: Mat3) -> Result<Rotation, Error> {
        let gtg = m.transpose() * m;
        let dev = (gtg - Mat3::identity()).norm();
        if dev > ROTATION_TOL {
            return Err(Error::NotARotation {
                reason: "g^T g differs from the identity",
                deviation: dev,
            });
        }
        let det_dev = (m.det() - 1.0).abs();
        if det_dev > ROTATION_TOL {
            return Err(Error::NotARotation {
                reason: "determinant differs from +1",
                deviation: det_dev,
            });
        }
        Ok(Rotation(m))
    }

    /// Builds a rotation from orthonormal row vectors (the images of the
    /// coordinate axes), validating as in [`Rotation::from_matrix`].
    pub fn from_rows(r1: Vec3, r2: Vec3, r3: Vec3) -> Result<Rotation, Error> {
        Rotation::from_matrix(Mat3([r1.0, r2.0, r3.0]))
    }

    /// Rotation by `theta` in the 2-3 plane, fixing the 1-axis.
    pub fn about_axis1(theta: f64) -> Rotation {
        let (s, c) = theta.sin_cos();
        Rotation(Mat3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]))
    }

    /// Rotation from a (not necessarily unit) quaternion (w, x, y, z).
    pub fn from_quaternion(q: [f64; 4]) -> Rotation {
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        let [w, x, y, z] = [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
        Rotation(Mat3([
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]))
    }

    /// Haar-uniform rotation from a seedable stream: a 4-component
    /// standard-normal draw normalized to a unit quaternion.
    pub fn haar<R: Rng>(rng: &mut R) -> Rotation {
        let q = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        Rotation::from_quaternion(q)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn inverse(&self) -> Rotation {
        Rotation(self.0.transpose())
    }

    /// Composition: `(a.compose(b))` acts as `a` after `b`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation(self.0 * other.0)
    }
}

/// Haar-uniform proper rotation, deterministic for a fixed seed.
pub fn random_rotation(seed: u64) -> Rotation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Rotation::haar(&mut rng)
}

// ---------------------------------------------------------------------------
// SO(3) actions
// ---------------------------------------------------------------------------

/// Componentwise SO(3) action at the tensor's order; each implementation is
/// closed on its type.
pub trait Rotate {
    fn rotate(&self, g: &Rotation) -> Self;
}

impl Rotate for Vec3 {
    fn rotate(&self, g: &Rotation) -> Vec3 {
        g.matrix().mul_vec(self)
    }
}

impl Rotate for Mat3 {
    fn rotate(&self, g: &Rotation) -> Mat3 {
        *g.matrix() * *self * g.matrix().transpose()
    }
}

impl Rotate for SymMat3 {
    fn rotate(&self, g: &Rotation) -> SymMat3 {
        SymMat3::from_mat(&self.to_mat().rotate(g))
    }
}

impl Rotate for Harm2 {
    fn rotate(&self, g: &Rotation) -> Harm2 {
        // Symmetry and trace are preserved analytically; re-reading the
        // stored slots symmetrizes away roundoff.
        Harm2::from_mat_unchecked(&SymMat3::from_mat(&self.to_mat().rotate(g)).to_mat())
    }
}

impl Rotate for Tensor3 {
    fn rotate(&self, g: &Rotation) -> Tensor3 {
        let m = g.matrix().0;
        let mut out = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut s = 0.0;
                    for r in 0..3 {
                        for t in 0..3 {
                            for w in 0..3 {
                                s += m[i][r] * m[j][t] * m[k][w] * self.0[r][t][w];
                            }
                        }
                    }
                    out[i][j][k] = s;
                }
            }
        }
        Tensor3(out)
    }
}

impl Rotate for PiezoTensor {
    fn rotate(&self, g: &Rotation) -> PiezoTensor {
        PiezoTensor::from_tensor3(&self.to_tensor3().rotate(g))
    }
}

impl Rotate for Harm3 {
    fn rotate(&self, g: &Rotation) -> Harm3 {
        Harm3::from_tensor3_unchecked(&self.to_tensor3().rotate(g))
    }
}

// ---------------------------------------------------------------------------
// Levi-Civita machinery
// ---------------------------------------------------------------------------

/// The matrix (eps v)_ij = eps_ijk v_k.
pub fn eps_times(v: &Vec3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            for k in 0..3 {
                *e += eps0(i, j, k) * v.0[k];
            }
        }
    }
    Mat3(m)
}

/// The vector eps[M]_i = eps_ijk M_jk; vanishes on symmetric matrices.
pub fn eps_bracket(m: &Mat3) -> Vec3 {
    let mut v = [0.0; 3];
    for (i, e) in v.iter_mut().enumerate() {
        for j in 0..3 {
            for k in 0..3 {
                *e += eps0(i, j, k) * m.0[j][k];
            }
        }
    }
    Vec3(v)
}

/// Axial vector of a skew-symmetric matrix: v = -1/2 eps[W].
pub fn axial_of_skew(w: &SkewMat3) -> Vec3 {
    eps_bracket(&w.to_mat()).scale(-0.5)
}

/// Skew-symmetric matrix of an axial vector: W = -(eps v).
pub fn skew_of_axial(v: &Vec3) -> SkewMat3 {
    let m = eps_times(v).scale(-1.0);
    SkewMat3::new(m.0[1][2], m.0[0][2], m.0[0][1])
}

/// Scalar triple product [u, v, w] = v . (eps u) w.
///
/// With this definition [e1, e2, e3] = +1, so the value coincides with the
/// determinant of the matrix whose columns are u, v, w.
pub fn triple_product(u: &Vec3, v: &Vec3, w: &Vec3) -> f64 {
    v.dot(&eps_times(u).mul_vec(w))
}

// ---------------------------------------------------------------------------
// Random sampling
// ---------------------------------------------------------------------------

/// Random tensors with independent standard-normal components, used by the
/// property suite and the CLI generator.
pub mod sample {
    use super::*;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn vec3<R: Rng>(rng: &mut R) -> Vec3 {
        Vec3([
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ])
    }

    pub fn harm3<R: Rng>(rng: &mut R) -> Harm3 {
        let mut c = [0.0; 7];
        for x in c.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        Harm3::new(c)
    }

    pub fn harm2<R: Rng>(rng: &mut R) -> Harm2 {
        let mut c = [0.0; 5];
        for x in c.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        Harm2::new(c)
    }

    /// A general piezoelectric tensor with 18 independent normal entries.
    pub fn piezo<R: Rng>(rng: &mut R) -> PiezoTensor {
        let mut rows = [[0.0; 6]; 3];
        for row in rows.iter_mut() {
            for e in row.iter_mut() {
                *e = rng.sample(StandardNormal);
            }
        }
        PiezoTensor::new(rows)
    }

    /// A totally symmetric piezoelectric tensor (harmonic part plus vector
    /// part; 10 degrees of freedom).
    pub fn symmetric_piezo<R: Rng>(rng: &mut R) -> PiezoTensor {
        let a = harm3(rng);
        let u = vec3(rng);
        crate::decompose::recompose(&crate::decompose::HarmonicParts {
            a,
            u,
            d: Harm2::ZERO,
            v: Vec3::ZERO,
        })
    }

    /// A purely harmonic piezoelectric tensor (7 degrees of freedom).
    pub fn harmonic_piezo<R: Rng>(rng: &mut R) -> PiezoTensor {
        let a = harm3(rng);
        crate::decompose::recompose(&crate::decompose::HarmonicParts {
            a,
            u: Vec3::ZERO,
            d: Harm2::ZERO,
            v: Vec3::ZERO,
        })
    }
}
