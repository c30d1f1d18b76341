//! Orthogonal irreducible (harmonic) decomposition of a piezoelectric
//! tensor into `(A, u, D, v)` and its exact inverse.
//!
//! The chain first extracts a traceless second-order tensor `N` and a
//! totally symmetric third-order tensor `S`:
//!
//! ```text
//! N_ij = eps_klj P_lki
//! S_ijk = P_ijk - (eps_jil N_kl + eps_kil N_jl) / 3
//! ```
//!
//! then splits `N` into its axial vector `v` and deviatoric part `D`, and
//! `S` into its trace vector `u` and harmonic part `A`.

use crate::tensor::{eps0, kron, Harm2, Harm3, Mat3, PiezoTensor, Rotate, Rotation, Tensor3, Vec3};

/// The four irreducible parts of a piezoelectric tensor.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HarmonicParts {
    /// Third-order harmonic part.
    pub a: Harm3,
    /// Trace vector of the symmetric part.
    pub u: Vec3,
    /// Second-order harmonic part.
    pub d: Harm2,
    /// Axial vector of the asymmetric part.
    pub v: Vec3,
}

impl HarmonicParts {
    pub const ZERO: HarmonicParts = HarmonicParts {
        a: Harm3::ZERO,
        u: Vec3::ZERO,
        d: Harm2::ZERO,
        v: Vec3::ZERO,
    };

    pub fn scale(&self, s: f64) -> HarmonicParts {
        HarmonicParts {
            a: self.a.scale(s),
            u: self.u.scale(s),
            d: self.d.scale(s),
            v: self.v.scale(s),
        }
    }

    /// Frobenius norm of the recomposed tensor's parts, combined; equals
    /// the input norm only up to the embedding factors, so use for scale
    /// heuristics rather than exact identities.
    pub fn component_norm(&self) -> f64 {
        (self.a.norm().powi(2) + self.u.norm().powi(2) + self.d.norm().powi(2)
            + self.v.norm().powi(2))
        .sqrt()
    }
}

impl Rotate for HarmonicParts {
    fn rotate(&self, g: &Rotation) -> HarmonicParts {
        HarmonicParts {
            a: self.a.rotate(g),
            u: self.u.rotate(g),
            d: self.d.rotate(g),
            v: self.v.rotate(g),
        }
    }
}

/// Decomposition together with the intermediate arrays of the extraction
/// chain, for diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct DecompositionTrace {
    /// Traceless (generally asymmetric) second-order intermediate.
    pub n: Mat3,
    /// Totally symmetric third-order intermediate.
    pub s: Tensor3,
    pub parts: HarmonicParts,
}

/// Splits a piezoelectric tensor into its four irreducible parts.
pub fn decompose(p: &PiezoTensor) -> HarmonicParts {
    decompose_traced(p).parts
}

/// As [`decompose`], exposing the intermediate `N` and `S` arrays.
pub fn decompose_traced(p: &PiezoTensor) -> DecompositionTrace {
    let t = p.to_tensor3().0;

    // N_ij = eps_klj P_lki
    let mut n = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    s += eps0(k, l, j) * t[l][k][i];
                }
            }
            n[i][j] = s;
        }
    }

    // S_ijk = P_ijk - (eps_jil N_kl + eps_kil N_jl) / 3
    let mut sym = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut corr = 0.0;
                for l in 0..3 {
                    corr += eps0(j, i, l) * n[k][l] + eps0(k, i, l) * n[j][l];
                }
                sym[i][j][k] = t[i][j][k] - corr / 3.0;
            }
        }
    }

    // v_k = eps_ijk N_ij ; D_ij = N_ij - eps_ijk v_k / 2
    let mut v = [0.0; 3];
    for (k, vk) in v.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                *vk += eps0(i, j, k) * n[i][j];
            }
        }
    }
    let mut d = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut corr = 0.0;
            for k in 0..3 {
                corr += eps0(i, j, k) * v[k];
            }
            d[i][j] = n[i][j] - 0.5 * corr;
        }
    }

    // u_k = S_iik ; A_ijk = S_ijk - (u_i d_jk + u_j d_ik + u_k d_ij) / 5
    let mut u = [0.0; 3];
    for (k, uk) in u.iter_mut().enumerate() {
        for i in 0..3 {
            *uk += sym[i][i][k];
        }
    }
    let mut a = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                a[i][j][k] = sym[i][j][k]
                    - (u[i] * kron(j, k) + u[j] * kron(i, k) + u[k] * kron(i, j)) / 5.0;
            }
        }
    }

    DecompositionTrace {
        n: Mat3(n),
        s: Tensor3(sym),
        parts: HarmonicParts {
            a: Harm3::from_tensor3_unchecked(&Tensor3(a)),
            u: Vec3(u),
            d: Harm2::from_mat_unchecked(&Mat3(d)),
            v: Vec3(v),
        },
    }
}

/// Rebuilds the piezoelectric tensor from its parts:
///
/// ```text
/// P_ijk = A_ijk + (eps_ilk D_lj + eps_ilj D_lk) / 3
///       + (d_ij u_k + d_ik u_j + d_jk u_i) / 5
///       + (eps_ijl eps_lkm v_m + eps_ilk eps_lmj v_m) / 6
/// ```
///
/// The result is symmetric in its last two indices by construction; the
/// compact return type asserts it.
pub fn recompose(h: &HarmonicParts) -> PiezoTensor {
    let a = h.a.to_tensor3().0;
    let d = h.d.to_mat().0;
    let (u, v) = (h.u.0, h.v.0);
    let mut t = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut x = a[i][j][k];
                for l in 0..3 {
                    x += (eps0(i, l, k) * d[l][j] + eps0(i, l, j) * d[l][k]) / 3.0;
                    for m in 0..3 {
                        x += (eps0(i, j, l) * eps0(l, k, m) * v[m]
                            + eps0(i, l, k) * eps0(l, m, j) * v[m])
                            / 6.0;
                    }
                }
                x += (kron(i, j) * u[k] + kron(i, k) * u[j] + kron(j, k) * u[i]) / 5.0;
                t[i][j][k] = x;
            }
        }
    }
    let out = Tensor3(t);
    debug_assert!(
        {
            let mut dev: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        dev = dev.max((out.0[i][j][k] - out.0[i][k][j]).abs());
                    }
                }
            }
            dev <= 1e-12 * out.norm().max(1.0)
        },
        "recomposed tensor lost pair symmetry"
    );
    PiezoTensor::from_tensor3(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{sample, Rotation};

    fn parts_close(a: &HarmonicParts, b: &HarmonicParts, tol: f64) -> bool {
        (a.a.to_tensor3() - b.a.to_tensor3()).norm() <= tol
            && (a.u - b.u).norm() <= tol
            && (a.d.to_mat() - b.d.to_mat()).norm() <= tol
            && (a.v - b.v).norm() <= tol
    }

    #[test]
    fn zero_decomposes_to_zero() {
        let h = decompose(&PiezoTensor::ZERO);
        assert!(parts_close(&h, &HarmonicParts::ZERO, 0.0));
        assert_eq!(recompose(&HarmonicParts::ZERO), PiezoTensor::ZERO);
    }

    #[test]
    fn pure_harmonic_passes_through() {
        let a = Harm3::d1(0.0, 0.0, 1.0);
        let p = PiezoTensor::from_tensor3(&a.to_tensor3());
        let h = decompose(&p);
        assert!((h.a.to_tensor3() - a.to_tensor3()).norm() < 1e-13);
        assert!(h.u.norm() < 1e-13 && h.v.norm() < 1e-13 && h.d.norm() < 1e-13);
        // and the harmonic part alone recomposes to the same tensor
        let p2 = recompose(&HarmonicParts { a, ..HarmonicParts::ZERO });
        assert!((p2.to_tensor3() - p.to_tensor3()).norm() < 1e-13);
    }

    #[test]
    fn pure_vector_part_recovers_u() {
        // P_ijk = (d_ij u_k + d_ik u_j + d_jk u_i) / 5 with u = e1:
        // the chain must return exactly u and no other part.
        let u = Vec3::new(1.0, 0.0, 0.0);
        let p = recompose(&HarmonicParts { u, ..HarmonicParts::ZERO });
        // independent check of the embedding itself
        let mut expect = Tensor3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    expect.0[i][j][k] =
                        (kron(i, j) * u.0[k] + kron(i, k) * u.0[j] + kron(j, k) * u.0[i]) / 5.0;
                }
            }
        }
        assert!((p.to_tensor3() - expect).norm() < 1e-15);
        let h = decompose(&p);
        assert!((h.u - u).norm() < 1e-14);
        assert!(h.a.norm() < 1e-14 && h.d.norm() < 1e-14 && h.v.norm() < 1e-14);
    }

    #[test]
    fn round_trip_on_random_tensors() {
        let mut rng = sample::rng(42);
        for _ in 0..200 {
            let p = sample::piezo(&mut rng);
            let q = recompose(&decompose(&p));
            let dev = (q.to_tensor3() - p.to_tensor3()).norm();
            assert!(dev <= 1e-12 * p.norm(), "round trip deviation {dev}");
        }
    }

    #[test]
    fn equivariance() {
        let mut rng = sample::rng(43);
        for _ in 0..50 {
            let p = sample::piezo(&mut rng);
            let g = Rotation::haar(&mut rng);
            let lhs = decompose(&p.rotate(&g));
            let rhs = decompose(&p).rotate(&g);
            assert!(parts_close(&lhs, &rhs, 1e-11 * p.norm()));
        }
    }

    #[test]
    fn summands_are_pairwise_orthogonal() {
        let mut rng = sample::rng(44);
        for _ in 0..50 {
            let p = sample::piezo(&mut rng);
            let h = decompose(&p);
            let summands = [
                recompose(&HarmonicParts { a: h.a, ..HarmonicParts::ZERO }),
                recompose(&HarmonicParts { u: h.u, ..HarmonicParts::ZERO }),
                recompose(&HarmonicParts { d: h.d, ..HarmonicParts::ZERO }),
                recompose(&HarmonicParts { v: h.v, ..HarmonicParts::ZERO }),
            ];
            for x in 0..4 {
                for y in (x + 1)..4 {
                    let ip = summands[x].to_tensor3().dot(&summands[y].to_tensor3());
                    assert!(
                        ip.abs() <= 1e-11 * p.norm().powi(2),
                        "summands {x},{y} not orthogonal: {ip}"
                    );
                }
            }
        }
    }

    #[test]
    fn linearity() {
        let mut rng = sample::rng(45);
        let p1 = sample::piezo(&mut rng);
        let p2 = sample::piezo(&mut rng);
        let lam = 2.75;
        let h = decompose(&(p1 + p2.scale(lam)));
        let h1 = decompose(&p1);
        let h2 = decompose(&p2);
        let combined = HarmonicParts {
            a: h1.a + h2.a.scale(lam),
            u: h1.u + h2.u.scale(lam),
            d: h1.d + h2.d.scale(lam),
            v: h1.v + h2.v.scale(lam),
        };
        assert!(parts_close(&h, &combined, 1e-13 * (p1.norm() + p2.norm())));
    }

    #[test]
    fn trace_exposes_n_and_s() {
        let mut rng = sample::rng(46);
        let p = sample::piezo(&mut rng);
        let tr = decompose_traced(&p);
        // N is traceless; S is totally symmetric.
        assert!(tr.n.trace().abs() < 1e-13);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!((tr.s.0[i][j][k] - tr.s.0[j][i][k]).abs() < 1e-13);
                    assert!((tr.s.0[i][j][k] - tr.s.0[i][k][j]).abs() < 1e-13);
                }
            }
        }
    }
}
