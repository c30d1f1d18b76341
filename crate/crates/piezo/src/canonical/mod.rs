//! SO(3)-orbit canonicalization: rotate the intermediate group into a
//! canonical frame, recover the third-order harmonic part through an
//! explicit case tree, and decide orbit equivalence.
//!
//! The case tree branches on exact algebraic conditions; numerically every
//! "= 0" test uses one configurable relative threshold `tol` applied to
//! data normalized to unit Frobenius norm. Near a branch boundary the
//! canonical form is necessarily discontinuous in the input.

mod align;

pub use align::{align, cubic_form_argmax};

use crate::decompose::{decompose, HarmonicParts};
use crate::error::Error;
use crate::intermediates::{compute_group, e_tensor, k_from_b, IntermediateGroup};
use crate::invariants::{evaluate_basis, TABLE};
use crate::tensor::{Harm3, Mat3, PiezoTensor, Rotate, Rotation, SymMat3, Vec3};
use std::fmt;

/// Leaf labels of the reconstruction case tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// The harmonic part vanishes (tr B below tolerance).
    Zero,
    /// Two of (c, u, v) are not collinear.
    I,
    /// D = 0, a leading vector exists, B22 != B33.
    II11,
    /// D = 0, leading vector, B22 = B33, A112 or A113 nonzero.
    II121,
    /// D = 0, leading vector, A112 = A113 = 0, A111 != 0.
    II1221,
    /// D = 0, leading vector, A112 = A113 = A111 = 0.
    II1222,
    /// D = 0, no vectors, B eigenvalues {0, t, t}.
    II21,
    /// D = 0, no vectors, B isotropic.
    II22,
    /// D has three distinct eigenvalues.
    IIIA,
    /// D axisymmetric, B breaks the residual symmetry.
    IIIB1,
    /// D axisymmetric, B symmetric under it, A112 or A113 nonzero.
    IIIB21,
    /// D axisymmetric, A112 = A113 = 0, A111 != 0.
    IIIB221,
    /// D axisymmetric, A112 = A113 = A111 = 0.
    IIIB222,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Zero => "ZERO",
            CaseTag::I => "I",
            CaseTag::II11 => "II.1.1",
            CaseTag::II121 => "II.1.2.1",
            CaseTag::II1221 => "II.1.2.2.1",
            CaseTag::II1222 => "II.1.2.2.2",
            CaseTag::II21 => "II.2.1",
            CaseTag::II22 => "II.2.2",
            CaseTag::IIIA => "III.A",
            CaseTag::IIIB1 => "III.B.1",
            CaseTag::IIIB21 => "III.B.2.1",
            CaseTag::IIIB221 => "III.B.2.2.1",
            CaseTag::IIIB222 => "III.B.2.2.2",
        };
        f.write_str(s)
    }
}

/// All thirteen case labels, for coverage bookkeeping.
pub const ALL_TAGS: [CaseTag; 13] = [
    CaseTag::Zero,
    CaseTag::I,
    CaseTag::II11,
    CaseTag::II121,
    CaseTag::II1221,
    CaseTag::II1222,
    CaseTag::II21,
    CaseTag::II22,
    CaseTag::IIIA,
    CaseTag::IIIB1,
    CaseTag::IIIB21,
    CaseTag::IIIB221,
    CaseTag::IIIB222,
];

/// A canonical representative of the SO(3)-orbit of a piezoelectric tensor.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// The frame change applied to the input.
    pub rotation: Rotation,
    /// The input's parts in the canonical frame (same orbit as the input).
    pub parts: HarmonicParts,
    /// The active branch of the case tree.
    pub tag: CaseTag,
    /// The harmonic part reconstructed from the intermediate group alone.
    pub recovered_a: Harm3,
}

// ---------------------------------------------------------------------------
// symmetric 3x3 eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Eigenvalues and orthonormal eigenvectors of a symmetric matrix.
/// Deterministic; eigenvectors are returned unsorted alongside values.
fn sym_eigen(s: &SymMat3) -> ([f64; 3], [Vec3; 3]) {
    let mut a = s.to_mat().0;
    let mut v = Mat3::identity().0;
    let scale = s.norm().max(1e-300);
    for _ in 0..64 {
        let off = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() <= 1e-300 {
                continue;
            }
            let theta = 0.5 * (2.0 * a[p][q]).atan2(a[q][q] - a[p][p]);
            let (sin, cos) = theta.sin_cos();
            // A <- J^T A J and V <- V J with the (p,q) Givens rotation J
            for k in 0..3 {
                let (akp, akq) = (a[k][p], a[k][q]);
                a[k][p] = cos * akp - sin * akq;
                a[k][q] = sin * akp + cos * akq;
            }
            for k in 0..3 {
                let (apk, aqk) = (a[p][k], a[q][k]);
                a[p][k] = cos * apk - sin * aqk;
                a[q][k] = sin * apk + cos * aqk;
            }
            for row in v.iter_mut() {
                let (rp, rq) = (row[p], row[q]);
                row[p] = cos * rp - sin * rq;
                row[q] = sin * rp + cos * rq;
            }
        }
    }
    let vals = [a[0][0], a[1][1], a[2][2]];
    let vecs = [
        Vec3([v[0][0], v[1][0], v[2][0]]),
        Vec3([v[0][1], v[1][1], v[2][1]]),
        Vec3([v[0][2], v[1][2], v[2][2]]),
    ];
    (vals, vecs)
}

/// Deterministic sign fix: flip so the largest-magnitude component is
/// positive; ties broken by the first of the tied components.
fn sign_fix(v: Vec3) -> Vec3 {
    let a = v.0;
    let mut best = 0;
    for i in 1..3 {
        if a[i].abs() > a[best].abs() + 0.0 {
            best = i;
        }
    }
    if a[best] < 0.0 {
        -v
    } else {
        v
    }
}

/// Orthonormal rows with det +1 from three eigenvectors.
fn frame_from_rows(r1: Vec3, r2: Vec3, r3: Vec3) -> Rotation {
    let r1 = sign_fix(r1.normalized());
    let r2 = sign_fix((r2 - r1.scale(r2.dot(&r1))).normalized());
    let mut r3 = (r3 - r1.scale(r3.dot(&r1)) - r2.scale(r3.dot(&r2))).normalized();
    let det = Mat3([r1.0, r2.0, r3.0]).det();
    if det < 0.0 {
        r3 = -r3;
    }
    Rotation::from_rows(r1, r2, r3).expect("orthonormalized rows form a rotation")
}

/// A deterministic orthonormal pair spanning the plane orthogonal to `n`.
fn orthonormal_complement(n: &Vec3) -> (Vec3, Vec3) {
    let mut axis = 0;
    for i in 1..3 {
        if n.0[i].abs() < n.0[axis].abs() {
            axis = i;
        }
    }
    let e = Vec3::basis(axis);
    let p = (e - n.scale(e.dot(n))).normalized();
    let q = n.cross(&p);
    (p, q)
}

// ---------------------------------------------------------------------------
// case classification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
enum TopCase {
    Zero,
    /// (first, second): indices into [c-as-K, u-as-F, v-as-G] drive the
    /// two linear systems of Case I.
    One { p: VecPick, q: VecPick },
    TwoLead(VecPick),
    TwoIso,
    Three,
}

/// Which vector (and hence which paired matrix) drives a linear solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VecPick {
    C,
    U,
    V,
}

fn pick_vec(grp: &IntermediateGroup, which: VecPick) -> Vec3 {
    match which {
        VecPick::C => grp.c,
        VecPick::U => grp.u,
        VecPick::V => grp.v,
    }
}

/// The matrix paired with a vector: K for c, F for u, G for v.
fn pick_mat(grp: &IntermediateGroup, which: VecPick) -> Mat3 {
    match which {
        VecPick::C => k_from_b(&grp.b).to_mat(),
        VecPick::U => grp.f.to_mat(),
        VecPick::V => grp.g.to_mat(),
    }
}

/// Scale of the problem: an estimate of the Frobenius norm of the
/// originating tensor, used to make thresholds relative.
fn group_scale(grp: &IntermediateGroup) -> f64 {
    grp.b
        .trace()
        .max(0.0)
        .sqrt()
        .max(grp.d.norm())
        .max(grp.u.norm())
        .max(grp.v.norm())
}

fn classify(grp: &IntermediateGroup, tol: f64) -> TopCase {
    let s = group_scale(grp);
    if s == 0.0 {
        return TopCase::Zero;
    }
    let i2 = grp.b.trace();
    if i2 <= tol * s * s {
        return TopCase::Zero;
    }
    let big = |x: &Vec3, scale: f64| x.norm() > tol * scale;
    let c_scale = s * s * s;
    let candidates = [
        (VecPick::C, grp.c, c_scale),
        (VecPick::U, grp.u, s),
        (VecPick::V, grp.v, s),
    ];
    let noncollinear = |a: &Vec3, b: &Vec3| a.cross(b).norm() > tol * a.norm() * b.norm();
    // deterministic pair precedence: (c,u), (c,v), (u,v)
    for &(pi, qi) in &[(0usize, 1usize), (0, 2), (1, 2)] {
        let (pw, pv, ps) = candidates[pi];
        let (qw, qv, qs) = candidates[qi];
        if big(&pv, ps) && big(&qv, qs) && noncollinear(&pv, &qv) {
            return TopCase::One { p: pw, q: qw };
        }
    }
    if grp.d.norm() <= tol * s {
        // leading-vector precedence inside case II: u, v, c
        for (w, x, xs) in [
            (VecPick::U, grp.u, s),
            (VecPick::V, grp.v, s),
            (VecPick::C, grp.c, c_scale),
        ] {
            if big(&x, xs) {
                return TopCase::TwoLead(w);
            }
        }
        TopCase::TwoIso
    } else {
        TopCase::Three
    }
}

// ---------------------------------------------------------------------------
// recovery walk (operates on a group already in the canonical frame)
// ---------------------------------------------------------------------------

struct Walk {
    tag: CaseTag,
    a: Harm3,
    /// Whether the branch fixed (A222, A223) by the axisymmetric
    /// convention (sqrt(radius), 0) rather than by data.
    convention: bool,
}

fn frame_fact(ok: bool, case: &'static str, equation: &'static str, residual: f64, allowed: f64) -> Result<(), Error> {
    if ok {
        Ok(())
    } else {
        Err(Error::InconsistentGroup {
            case,
            equation,
            residual,
            allowed,
        })
    }
}

fn walk(grp: &IntermediateGroup, tol: f64) -> Result<Walk, Error> {
    let s = group_scale(grp);
    let top = classify(grp, tol);
    let i2 = grp.b.trace();
    let a_len = i2.max(0.0).sqrt(); // |A|
    let b = grp.b.to_mat().0;

    match top {
        TopCase::Zero => Ok(Walk {
            tag: CaseTag::Zero,
            a: Harm3::ZERO,
            convention: false,
        }),
        TopCase::One { p, q } => {
            let pv = pick_vec(grp, p);
            let qv = pick_vec(grp, q);
            let pm = pick_mat(grp, p);
            let qm = pick_mat(grp, q);
            let p1 = pv.0[0];
            let allowed = tol * pv.norm().max(1e-300);
            frame_fact(
                pv.0[1].abs() <= allowed && pv.0[2].abs() <= allowed && p1 > 0.0,
                "I",
                "leading vector along +e1",
                pv.0[1].abs().max(pv.0[2].abs()),
                allowed,
            )?;
            let q_allowed = tol * qv.norm().max(1e-300);
            frame_fact(
                qv.0[2].abs() <= q_allowed && qv.0[1] > 0.0,
                "I",
                "companion vector in the e1-e2 plane with positive e2 part",
                qv.0[2].abs(),
                q_allowed,
            )?;
            let a111 = pm.0[0][0] / p1;
            let a112 = pm.0[0][1] / p1;
            let a113 = pm.0[0][2] / p1;
            let a122 = pm.0[1][1] / p1;
            let a123 = pm.0[1][2] / p1;
            let (q1, q2) = (qv.0[0], qv.0[1]);
            let a222 = (qm.0[1][1] - a122 * q1) / q2;
            let a223 = (qm.0[1][2] - a123 * q1) / q2;
            Ok(Walk {
                tag: CaseTag::I,
                a: Harm3::new([a111, a122, a112, a222, a113, a223, a123]),
                convention: false,
            })
        }
        TopCase::TwoLead(lead) => {
            let lv = pick_vec(grp, lead);
            let lm = pick_mat(grp, lead);
            let allowed = tol * lv.norm().max(1e-300);
            frame_fact(
                lv.0[1].abs() <= allowed && lv.0[2].abs() <= allowed && lv.0[0] > 0.0,
                "II.1",
                "leading vector along +e1",
                lv.0[1].abs().max(lv.0[2].abs()),
                allowed,
            )?;
            frame_fact(
                b[1][2].abs() <= tol * i2,
                "II.1",
                "B23 = 0",
                b[1][2].abs(),
                tol * i2,
            )?;
            let l1 = lv.0[0];
            let a111 = lm.0[0][0] / l1;
            let a112 = lm.0[0][1] / l1;
            let a113 = lm.0[0][2] / l1;
            let a122 = lm.0[1][1] / l1;
            let a123 = lm.0[1][2] / l1;

            if (b[1][1] - b[2][2]).abs() > tol * i2 {
                // c2 = c3 = 0 by collinearity with the leading vector
                let den = b[1][1] - b[2][2];
                let a222 = (-a112 * (b[0][0] - b[2][2]) - 2.0 * a122 * b[0][1] - 2.0 * a123 * b[0][2]) / den;
                let a223 = (-a113 * (b[0][0] - b[2][2]) - 2.0 * a123 * b[0][1]
                    + 2.0 * (a111 + a122) * b[0][2])
                    / den;
                Ok(Walk {
                    tag: CaseTag::II11,
                    a: Harm3::new([a111, a122, a112, a222, a113, a223, a123]),
                    convention: false,
                })
            } else {
                solve_residual_symmetry(
                    grp,
                    [a111, a122, a112, a113, a123],
                    CaseTag::II121,
                    CaseTag::II1221,
                    CaseTag::II1222,
                    tol,
                    a_len,
                    s,
                    // Case II.1 frames force every vector onto e1, so only
                    // the axisymmetric convention can fix (A222, A223).
                    false,
                )
            }
        }
        TopCase::TwoIso => {
            // all vectors vanish and D = 0; B must be diagonal here
            let offdiag = b[0][1].abs().max(b[0][2].abs()).max(b[1][2].abs());
            frame_fact(offdiag <= tol * i2, "II.2", "B diagonal", offdiag, tol * i2)?;
            let i4 = grp.b.to_mat().0.iter().enumerate().map(|(i, r)| {
                r.iter().enumerate().map(|(j, x)| x * b[j][i]).sum::<f64>()
            }).sum::<f64>();
            match resultant_certificate(&grp.b, i2, i4, tol) {
                ResultantClass::TripleEigenvalue => {
                    let b11 = i2 / 3.0;
                    let a111 = (2.0 * b11 / 3.0).sqrt();
                    let a222 = (b11 / 3.0).sqrt();
                    let a122 = -(b11 / 6.0).sqrt();
                    Ok(Walk {
                        tag: CaseTag::II22,
                        a: Harm3::new([a111, a122, 0.0, a222, 0.0, 0.0, 0.0]),
                        convention: false,
                    })
                }
                ResultantClass::ZeroPlusDouble => {
                    frame_fact(
                        b[0][0].abs() <= tol * i2,
                        "II.2.1",
                        "simple zero eigenvalue on axis 1",
                        b[0][0].abs(),
                        tol * i2,
                    )?;
                    let a222 = (0.5 * b[1][1]).max(0.0).sqrt();
                    Ok(Walk {
                        tag: CaseTag::II21,
                        a: Harm3::new([0.0, 0.0, 0.0, a222, 0.0, 0.0, 0.0]),
                        convention: true,
                    })
                }
                ResultantClass::Violation => Err(Error::InconsistentGroup {
                    case: "II.2",
                    equation: "resultant of the eigenvalue system",
                    residual: (i2 * i2 - 3.0 * i4).abs().min((i2 * i2 - 2.0 * i4).abs()),
                    allowed: tol * i2 * i2,
                }),
            }
        }
        TopCase::Three => {
            let d = grp.d.to_mat().0;
            let d_norm = grp.d.norm();
            let offdiag = d[0][1].abs().max(d[0][2].abs()).max(d[1][2].abs());
            frame_fact(offdiag <= tol * d_norm, "III", "D diagonal", offdiag, tol * d_norm)?;
            let e = e_tensor(grp).0;
            if (d[1][1] - d[2][2]).abs() <= tol * d_norm {
                // axisymmetric D: the repeated eigenvalue sits on axes 2, 3
                let d22 = 0.5 * (d[1][1] + d[2][2]);
                frame_fact(
                    (d[0][0] + 2.0 * d22).abs() <= 3.0 * tol * d_norm,
                    "III.B",
                    "D = D22 diag(-2, 1, 1)",
                    (d[0][0] + 2.0 * d22).abs(),
                    3.0 * tol * d_norm,
                )?;
                let t = 3.0 * d22;
                let a113 = e[0][1] / t;
                let a123 = e[1][1] / t;
                let a112 = -e[0][2] / t;
                let a122 = -e[1][2] / t;
                let a111 = -(e[2][1] - e[1][2]) / t;

                // two equations for (A222, A223) from c
                let m11 = b[1][1] - b[2][2];
                let m12 = 2.0 * b[1][2];
                let det = m11 * m11 + m12 * m12;
                if det.sqrt() > tol * i2 {
                    let r1 = grp.c.0[1] + (b[2][2] - b[0][0]) * a112
                        - 2.0 * b[0][1] * a122
                        - 2.0 * b[0][2] * a123;
                    let r2 = grp.c.0[2] + (b[2][2] - b[0][0]) * a113 - 2.0 * b[0][1] * a123
                        + 2.0 * b[0][2] * (a111 + a122)
                        + 2.0 * b[1][2] * a112;
                    // [[m11, m12], [-m12, m11]] has determinant det
                    let a222 = (m11 * r1 - m12 * r2) / det;
                    let a223 = (m12 * r1 + m11 * r2) / det;
                    Ok(Walk {
                        tag: CaseTag::IIIB1,
                        a: Harm3::new([a111, a122, a112, a222, a113, a223, a123]),
                        convention: false,
                    })
                } else {
                    solve_residual_symmetry(
                        grp,
                        [a111, a122, a112, a113, a123],
                        CaseTag::IIIB21,
                        CaseTag::IIIB221,
                        CaseTag::IIIB222,
                        tol,
                        a_len,
                        s,
                        true,
                    )
                }
            } else {
                // three distinct diagonal entries, descending by frame choice
                let q1 = d[0][0] + 2.0 * d[1][1]; // = D22 - D33
                let q2 = 2.0 * d[0][0] + d[1][1]; // = D11 - D33
                let q3 = d[0][0] - d[1][1];
                for (val, name) in [(q1, "D22 - D33"), (q2, "D11 - D33"), (q3, "D11 - D22")] {
                    frame_fact(
                        val.abs() > tol * d_norm,
                        "III.A",
                        name,
                        val.abs(),
                        tol * d_norm,
                    )?;
                }
                let a123 = e[0][0] / q1;
                let a223 = e[1][0] / q1;
                let a112 = e[0][2] / q3;
                let a222 = -e[2][0] / q1 - a112;
                let a113 = -e[0][1] / q2;
                let a122 = e[1][2] / q3;
                let a111 = e[2][1] / q2 - a122;
                Ok(Walk {
                    tag: CaseTag::IIIA,
                    a: Harm3::new([a111, a122, a112, a222, a113, a223, a123]),
                    convention: false,
                })
            }
        }
    }
}

/// Shared tail of cases II.1.2 and III.B.2: the five components
/// `(A111, A122, A112, A113, A123)` are known and `(A222, A223)` follow
/// from the quadratic relations of B, from an off-axis vector, or from the
/// axisymmetric convention.
#[allow(clippy::too_many_arguments)]
fn solve_residual_symmetry(
    grp: &IntermediateGroup,
    five: [f64; 5],
    tag_quad: CaseTag,
    tag_a111: CaseTag,
    tag_rest: CaseTag,
    tol: f64,
    a_len: f64,
    s: f64,
    allow_vector_flow: bool,
) -> Result<Walk, Error> {
    let [a111, a122, a112, a113, a123] = five;
    let b = grp.b.to_mat().0;
    let det = a112 * a112 + a113 * a113;
    if det.sqrt() > tol * a_len {
        // B22 = B33 and B23 = 0 linearize in (A222, A223):
        //   [a113 -a112] [A222]   [2 a111 a123 - 2 a112 a113]
        //   [a112  a113] [A223] = [-a111^2 - 2 a111 a122 - a113^2]
        let r1 = 2.0 * a111 * a123 - 2.0 * a112 * a113 + b[1][2];
        let r2 = -a111 * a111 - 2.0 * a111 * a122 - a113 * a113 - 0.5 * (b[1][1] - b[2][2]);
        let a222 = (a113 * r1 + a112 * r2) / det;
        let a223 = (-a112 * r1 + a113 * r2) / det;
        return Ok(Walk {
            tag: tag_quad,
            a: Harm3::new([a111, a122, a112, a222, a113, a223, a123]),
            convention: false,
        });
    }
    if a111.abs() > tol * a_len {
        // A112 = A113 = 0 forces A123 = 0 and A122 = -A111/2; both are
        // already data so only (A222, A223) remain.
        if allow_vector_flow {
            if let Some(w) = vector_flow(grp, five, tag_a111, tol, s) {
                return Ok(w);
            }
        }
        let radius2 = 0.5 * b[1][1] - a122 * a122;
        let a222 = radius2.max(0.0).sqrt();
        return Ok(Walk {
            tag: tag_a111,
            a: Harm3::new([a111, a122, a112, a222, a113, 0.0, a123]),
            convention: true,
        });
    }
    // A111 = A112 = A113 = 0
    let det2 = a122 * a122 + a123 * a123;
    if det2.sqrt() > tol * a_len {
        //   [a122  a123] [A222]   [B12 / 2]
        //   [-a123 a122] [A223] = [B13 / 2]
        let r1 = 0.5 * b[0][1];
        let r2 = 0.5 * b[0][2];
        let a222 = (a122 * r1 - a123 * r2) / det2;
        let a223 = (a123 * r1 + a122 * r2) / det2;
        return Ok(Walk {
            tag: tag_rest,
            a: Harm3::new([a111, a122, a112, a222, a113, a223, a123]),
            convention: false,
        });
    }
    if allow_vector_flow {
        if let Some(w) = vector_flow(grp, five, tag_rest, tol, s) {
            return Ok(w);
        }
    }
    if tag_rest == CaseTag::II1222 {
        // the B11 = B22 subcase pins (A222, A223) = (0, 0) with the five
        // known from the leading vector; otherwise B11 = 0 and the
        // convention applies
        frame_fact(
            b[0][1].abs() <= tol * grp.b.trace() && b[0][2].abs() <= tol * grp.b.trace(),
            "II.1.2.2.2",
            "B12 = B13 = 0",
            b[0][1].abs().max(b[0][2].abs()),
            tol * grp.b.trace(),
        )?;
        if (b[0][0] - b[1][1]).abs() <= tol * grp.b.trace() {
            return Ok(Walk {
                tag: tag_rest,
                a: Harm3::new([a111, a122, a112, 0.0, a113, 0.0, a123]),
                convention: false,
            });
        }
    }
    let radius2 = 0.5 * b[1][1] - a122 * a122;
    let a222 = radius2.max(0.0).sqrt();
    Ok(Walk {
        tag: tag_rest,
        a: Harm3::new([a111, a122, a112, a222, a113, 0.0, a123]),
        convention: true,
    })
}

/// Solves (A222, A223) from a vector with off-axis components, trying
/// u, v, c in that order. Returns None when every vector is on the 1-axis
/// (or below threshold), which is when the axisymmetric convention applies.
fn vector_flow(
    grp: &IntermediateGroup,
    five: [f64; 5],
    tag: CaseTag,
    tol: f64,
    s: f64,
) -> Option<Walk> {
    let [a111, a122, a112, a113, a123] = five;
    let c_scale = s * s * s;
    for (which, x, xs) in [
        (VecPick::U, grp.u, s),
        (VecPick::V, grp.v, s),
        (VecPick::C, grp.c, c_scale),
    ] {
        if x.norm() <= tol * xs {
            continue;
        }
        let perp = (x.0[1] * x.0[1] + x.0[2] * x.0[2]).sqrt();
        if perp <= tol * x.norm() {
            continue;
        }
        let q = pick_mat(grp, which);
        //   [x2  x3] [A222]   [Q22 - a122 x1]
        //   [-x3 x2] [A223] = [Q23 - a123 x1 + a112 x3]
        let r1 = q.0[1][1] - a122 * x.0[0];
        let r2 = q.0[1][2] - a123 * x.0[0] + a112 * x.0[2];
        let det = perp * perp;
        let a222 = (x.0[1] * r1 - x.0[2] * r2) / det;
        let a223 = (x.0[2] * r1 + x.0[1] * r2) / det;
        return Some(Walk {
            tag,
            a: Harm3::new([a111, a122, a112, a222, a113, a223, a123]),
            convention: false,
        });
    }
    None
}

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// Reconstructs the harmonic part from an intermediate group given in the
/// canonical frame of `tag`.
///
/// The group alone determines the result; the harmonic part that produced
/// the group is never consulted. Fails if the group is inconsistent (no
/// harmonic tensor reproduces it within tolerance) or sits in a different
/// case than requested.
pub fn recover_a(grp: &IntermediateGroup, tag: CaseTag, tol: f64) -> Result<Harm3, Error> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let w = walk(grp, tol)?;
    if w.tag != tag {
        return Err(Error::CaseMismatch {
            requested: tag.to_string(),
            found: w.tag.to_string(),
        });
    }
    verify_reconstruction(grp, &w.a, w.convention)?;
    Ok(w.a)
}

/// Checks that a recovered harmonic part reproduces every group member.
fn verify_reconstruction(grp: &IntermediateGroup, a: &Harm3, convention: bool) -> Result<(), Error> {
    let s = group_scale(grp).max(1e-300);
    let rebuilt = compute_group(&HarmonicParts {
        a: *a,
        u: grp.u,
        d: grp.d,
        v: grp.v,
    });
    // Residual-symmetry conventions replace (A222, A223) by a rotated
    // representative; B, F, G, H, w, c are invariant under that rotation
    // for consistent groups, so the same gate applies.
    let _ = convention;
    let gate = 1e-6;
    let checks: [(&'static str, f64, f64); 6] = [
        ("B = A:A", (rebuilt.b.to_mat() - grp.b.to_mat()).norm(), s * s),
        ("c = A:B", (rebuilt.c - grp.c).norm(), s * s * s),
        ("F = A u", (rebuilt.f.to_mat() - grp.f.to_mat()).norm(), s * s),
        ("G = A v", (rebuilt.g.to_mat() - grp.g.to_mat()).norm(), s * s),
        ("H part of A:D", (rebuilt.h.to_mat() - grp.h.to_mat()).norm(), s * s),
        ("w part of A:D", (rebuilt.w - grp.w).norm(), s * s),
    ];
    for (equation, residual, scale) in checks {
        let allowed = gate * scale.max(1e-300);
        if residual > allowed {
            return Err(Error::InconsistentGroup {
                case: "reconstruction",
                equation,
                residual,
                allowed,
            });
        }
    }
    Ok(())
}

/// Canonicalizes a piezoelectric tensor: returns a frame change, the parts
/// in that frame, the active case, and the harmonic part recovered from
/// the intermediate group alone.
pub fn canonicalize(p: &PiezoTensor, tol: f64) -> Result<CanonicalForm, Error> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let scale = p.norm();
    if scale == 0.0 {
        return Ok(CanonicalForm {
            rotation: Rotation::identity(),
            parts: HarmonicParts::ZERO,
            tag: CaseTag::Zero,
            recovered_a: Harm3::ZERO,
        });
    }
    let pn = p.scale(1.0 / scale);
    let parts = decompose(&pn);
    let grp = compute_group(&parts);
    let top = classify(&grp, tol);

    // frame for the top-level case
    let frame = match top {
        TopCase::Zero => Rotation::identity(),
        TopCase::One { p: pw, q: qw } => {
            let pv = pick_vec(&grp, pw);
            let qv = pick_vec(&grp, qw);
            let e1 = pv.normalized();
            let e2 = (qv - e1.scale(qv.dot(&e1))).normalized();
            let e3 = e1.cross(&e2);
            Rotation::from_rows(e1, e2, e3).expect("orthonormal case I frame")
        }
        TopCase::TwoLead(lead) => {
            let lv = pick_vec(&grp, lead);
            let e1 = lv.normalized();
            let (e2, e3) = orthonormal_complement(&e1);
            let g0 = Rotation::from_rows(e1, e2, e3).expect("orthonormal case II frame");
            // rotate about the 1-axis to null B23
            let b1 = grp.b.rotate(&g0).to_mat().0;
            let theta = 0.5 * (2.0 * b1[1][2]).atan2(b1[1][1] - b1[2][2]);
            Rotation::about_axis1(theta).compose(&g0)
        }
        TopCase::TwoIso => {
            let i2 = grp.b.trace();
            let (vals, vecs) = sym_eigen(&grp.b);
            let mut idx = [0usize, 1, 2];
            idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
            let spread = vals[idx[2]] - vals[idx[0]];
            if spread <= tol * i2 {
                // isotropic B: the frame comes from the cubic form of A
                let e1 = cubic_form_argmax(&parts.a)?;
                let e2 = circle_argmax(&parts.a, &e1);
                let e3 = e1.cross(&e2);
                Rotation::from_rows(e1, e2, e3).expect("orthonormal case II.2.2 frame")
            } else {
                // simple eigenvalue on axis 1, repeated pair on axes 2, 3
                let (simple, d1, d2) = if (vals[idx[1]] - vals[idx[0]]).abs()
                    <= (vals[idx[2]] - vals[idx[1]]).abs()
                {
                    (idx[2], idx[0], idx[1])
                } else {
                    (idx[0], idx[1], idx[2])
                };
                frame_from_rows(vecs[simple], vecs[d1], vecs[d2])
            }
        }
        TopCase::Three => {
            let d_norm = grp.d.norm();
            let (vals, vecs) = sym_eigen(&SymMat3::from_mat(&grp.d.to_mat()));
            let mut idx = [0usize, 1, 2];
            // descending diagonal by default
            idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap());
            let gap01 = (vals[idx[0]] - vals[idx[1]]).abs();
            let gap12 = (vals[idx[1]] - vals[idx[2]]).abs();
            if gap01.min(gap12) <= tol * d_norm {
                // repeated pair on axes 2, 3
                let (simple, d1, d2) = if gap01 <= gap12 {
                    (idx[2], idx[0], idx[1])
                } else {
                    (idx[0], idx[1], idx[2])
                };
                frame_from_rows(vecs[simple], vecs[d1], vecs[d2])
            } else {
                frame_from_rows(vecs[idx[0]], vecs[idx[1]], vecs[idx[2]])
            }
        }
    };

    let grp1 = grp.rotate(&frame);
    let w1 = walk(&grp1, tol)?;

    // Branches that end in the axisymmetric convention leave a residual
    // rotation in the 2-3 plane; fix it from the true harmonic part so the
    // canonical parts land exactly on the convention representative.
    let total = if w1.convention {
        let a1 = parts.a.rotate(&frame);
        let phi = a1.a223().atan2(a1.a222());
        Rotation::about_axis1(-phi / 3.0).compose(&frame)
    } else {
        frame
    };

    let grp2 = grp.rotate(&total);
    let w2 = walk(&grp2, tol)?;
    debug_assert_eq!(w1.tag, w2.tag);
    verify_reconstruction(&grp2, &w2.a, w2.convention)?;

    Ok(CanonicalForm {
        rotation: total,
        parts: parts.rotate(&total).scale(scale),
        tag: w2.tag,
        recovered_a: w2.a.scale(scale),
    })
}

/// Maximizer of the cubic form on the unit circle orthogonal to `e1`.
fn circle_argmax(a: &Harm3, e1: &Vec3) -> Vec3 {
    let (p, q) = orthonormal_complement(e1);
    let f = |phi: f64| {
        let x = p.scale(phi.cos()) + q.scale(phi.sin());
        a.cubic_form(&x)
    };
    let n = 2048;
    let mut best_phi = 0.0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let v = f(phi);
        if v > best {
            best = v;
            best_phi = phi;
        }
    }
    // golden-section refinement around the best sample
    let gr = 0.5 * (5.0f64.sqrt() - 1.0);
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let (mut lo, mut hi) = (best_phi - step, best_phi + step);
    for _ in 0..120 {
        let m1 = hi - gr * (hi - lo);
        let m2 = lo + gr * (hi - lo);
        if f(m1) > f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let phi = 0.5 * (lo + hi);
    p.scale(phi.cos()) + q.scale(phi.sin())
}

// ---------------------------------------------------------------------------
// orbit comparison
// ---------------------------------------------------------------------------

/// Per-invariant residual report of an orbit-equality decision.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub equal: bool,
    /// `(formula id, normalized residual)`, sorted worst first.
    pub residuals: Vec<(&'static str, f64)>,
}

impl OrbitReport {
    /// The largest normalized residual.
    pub fn worst(&self) -> f64 {
        self.residuals.first().map(|&(_, r)| r).unwrap_or(0.0)
    }
}

/// Decides SO(3)-orbit equality by comparing all 260 invariants at a
/// degree-scaled relative tolerance.
pub fn orbit_equal(p1: &PiezoTensor, p2: &PiezoTensor, tol: f64) -> OrbitReport {
    let m = p1.norm().max(p2.norm());
    let v1 = evaluate_basis(p1);
    let v2 = evaluate_basis(p2);
    let mut residuals: Vec<(&'static str, f64)> = TABLE
        .iter()
        .zip(v1.values.iter().zip(v2.values.iter()))
        .map(|(d, (a, b))| {
            let scale = m.powi(d.degree as i32).max(1e-300);
            (d.id, (a - b).abs() / scale)
        })
        .collect();
    residuals.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    OrbitReport {
        equal: residuals.first().map(|&(_, r)| r <= tol).unwrap_or(true),
        residuals,
    }
}

// ---------------------------------------------------------------------------
// resultant classification
// ---------------------------------------------------------------------------

/// Outcome of the eigenvalue-structure classification for a diagonal B
/// with vanishing c: the resultant of the quadratic and cubic eigenvalue
/// constraints factors as `(I2^2 - 3 I4)(I2^2 - 2 I4)^2 / 162`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResultantClass {
    /// `I2^2 = 3 I4`: all three eigenvalues equal `I2 / 3`.
    TripleEigenvalue,
    /// `I2^2 = 2 I4`: eigenvalues `{0, I2/2, I2/2}`.
    ZeroPlusDouble,
    /// Neither factor vanishes: the matrix cannot arise from this branch.
    Violation,
}

/// Classifies a diagonal B (with `I2 = tr B`, `I4 = tr B^2`) by which
/// factor of the resultant vanishes, cross-checking the eigenvalue pattern
/// on the diagonal itself.
pub fn resultant_certificate(b_diag: &SymMat3, i2: f64, i4: f64, tol: f64) -> ResultantClass {
    let scale = (i2 * i2).max(i4.abs()).max(1e-300);
    let e = b_diag.entries();
    let diag = [e[0], e[1], e[2]];
    if (i2 * i2 - 3.0 * i4).abs() <= tol * scale {
        let target = i2 / 3.0;
        if diag.iter().all(|x| (x - target).abs() <= tol.sqrt() * scale.sqrt()) {
            return ResultantClass::TripleEigenvalue;
        }
        return ResultantClass::Violation;
    }
    if (i2 * i2 - 2.0 * i4).abs() <= tol * scale {
        // one zero eigenvalue and a double eigenvalue I2/2, in any position
        let target = i2 / 2.0;
        let ok = (0..3).any(|z| {
            diag[z].abs() <= tol.sqrt() * scale.sqrt()
                && (0..3)
                    .filter(|&k| k != z)
                    .all(|k| (diag[k] - target).abs() <= tol.sqrt() * scale.sqrt())
        });
        if ok {
            return ResultantClass::ZeroPlusDouble;
        }
        return ResultantClass::Violation;
    }
    ResultantClass::Violation
}

#[cfg(test)]
mod tests;
