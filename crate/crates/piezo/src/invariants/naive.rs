//! Reference evaluation of the invariant basis by raw index summation.
//!
//! This path re-derives everything from the 27-entry array with explicit
//! loops: its own decomposition chain, its own intermediate contractions,
//! and per-formula evaluation that never reuses the typed tensor
//! machinery. It exists solely to cross-check the structured evaluator.

use super::{Expr, InvariantVector, MatId, MatPow, Slot, VecId, BASIS_SIZE, TABLE};
use crate::tensor::PiezoTensor;

type V = [f64; 3];
type M = [[f64; 3]; 3];
type T = [[[f64; 3]; 3]; 3];

fn eps(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

fn matmul(a: &M, b: &M) -> M {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, row) in b.iter().enumerate() {
                out[i][j] += a[i][k] * row[j];
            }
        }
    }
    out
}

fn matpow(a: &M, p: u8) -> M {
    match p {
        1 => *a,
        2 => matmul(a, a),
        3 => matmul(&matmul(a, a), a),
        _ => unreachable!(),
    }
}

fn matvec(a: &M, x: &V) -> V {
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..3 {
            *o += a[i][j] * x[j];
        }
    }
    out
}

fn dot(a: &V, b: &V) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Raw {
    a: T,
    mats: [M; 5], // B, D, F, G, H
    vecs: [V; 4], // u, v, w, c
}

/// The full extraction chain as raw summations over the 27-entry array.
fn build(p: &PiezoTensor) -> Raw {
    // expand the compact rows without going through Tensor3
    let rows = p.rows();
    let cols: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];
    let mut t: T = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for (col, &(j, k)) in cols.iter().enumerate() {
            t[i][j][k] = rows[i][col];
            t[i][k][j] = rows[i][col];
        }
    }

    // N_ij = eps_klj P_lki, S = P - (eps_jil N_kl + eps_kil N_jl)/3
    let mut n: M = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    n[i][j] += eps(k, l, j) * t[l][k][i];
                }
            }
        }
    }
    let mut s: T = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut corr = 0.0;
                for l in 0..3 {
                    corr += eps(j, i, l) * n[k][l] + eps(k, i, l) * n[j][l];
                }
                s[i][j][k] = t[i][j][k] - corr / 3.0;
            }
        }
    }
    // v_k = eps_ijk N_ij, D = N - eps v / 2, u_k = S_iik, A = S - sym(u)/5
    let mut v: V = [0.0; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                v[k] += eps(i, j, k) * n[i][j];
            }
        }
    }
    let mut d: M = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut corr = 0.0;
            for k in 0..3 {
                corr += eps(i, j, k) * v[k];
            }
            d[i][j] = n[i][j] - 0.5 * corr;
        }
    }
    let mut u: V = [0.0; 3];
    for k in 0..3 {
        for i in 0..3 {
            u[k] += s[i][i][k];
        }
    }
    let mut a: T = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                a[i][j][k] =
                    s[i][j][k] - (u[i] * delta(j, k) + u[j] * delta(i, k) + u[k] * delta(i, j)) / 5.0;
            }
        }
    }

    // B_ij = A_ikl A_jkl, c_i = A_ijk B_jk, F = A u, G = A v
    let mut b: M = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    b[i][j] += a[i][k][l] * a[j][k][l];
                }
            }
        }
    }
    let mut c: V = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i] += a[i][j][k] * b[j][k];
            }
        }
    }
    let mut f: M = [[0.0; 3]; 3];
    let mut g: M = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                f[i][j] += a[i][j][k] * u[k];
                g[i][j] += a[i][j][k] * v[k];
            }
        }
    }
    // E_ij = A_ikl eps_jml D_km, w = -eps[E]/2, H = E + eps w
    let mut e: M = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    for m in 0..3 {
                        e[i][j] += a[i][k][l] * eps(j, m, l) * d[k][m];
                    }
                }
            }
        }
    }
    let mut w: V = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                w[i] += -0.5 * eps(i, j, k) * e[j][k];
            }
        }
    }
    let mut h: M = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut ew = 0.0;
            for k in 0..3 {
                ew += eps(i, j, k) * w[k];
            }
            h[i][j] = e[i][j] + ew;
        }
    }

    Raw {
        a,
        mats: [b, d, f, g, h],
        vecs: [u, v, w, c],
    }
}

impl Raw {
    fn mat(&self, (m, p): MatPow) -> M {
        let i = match m {
            MatId::B => 0,
            MatId::D => 1,
            MatId::F => 2,
            MatId::G => 3,
            MatId::H => 4,
        };
        matpow(&self.mats[i], p)
    }

    fn vec(&self, v: VecId) -> V {
        match v {
            VecId::U => self.vecs[0],
            VecId::V => self.vecs[1],
            VecId::W => self.vecs[2],
            VecId::C => self.vecs[3],
        }
    }

    fn slot(&self, (v, mp): Slot) -> V {
        let x = self.vec(v);
        match mp {
            None => x,
            Some(mp) => matvec(&self.mat(mp), &x),
        }
    }

    fn eval(&self, expr: &Expr) -> f64 {
        match *expr {
            Expr::NormA => {
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            s += self.a[i][j][k] * self.a[i][j][k];
                        }
                    }
                }
                s
            }
            Expr::CubicAc => {
                let c = self.vec(VecId::C);
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            s += self.a[i][j][k] * c[i] * c[j] * c[k];
                        }
                    }
                }
                s
            }
            Expr::Dot(x, y) => dot(&self.vec(x), &self.vec(y)),
            Expr::Trace(prod) => {
                let mut m = self.mat(prod[0]);
                for mp in &prod[1..] {
                    m = matmul(&m, &self.mat(*mp));
                }
                m[0][0] + m[1][1] + m[2][2]
            }
            Expr::Quad(x, mp, y) => dot(&self.vec(x), &matvec(&self.mat(mp), &self.vec(y))),
            Expr::Eps(x, mp, nq) => {
                let prod = matmul(&self.mat(mp), &self.mat(nq));
                let xv = self.vec(x);
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            s += xv[i] * eps(i, j, k) * prod[j][k];
                        }
                    }
                }
                s
            }
            Expr::Triple(s1, s2, s3) => {
                // [x, y, z] = y . (eps x) z = sum eps_ijk y_i x_k z_j
                let x = self.slot(s1);
                let y = self.slot(s2);
                let z = self.slot(s3);
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            s += eps(i, j, k) * y[i] * x[k] * z[j];
                        }
                    }
                }
                s
            }
        }
    }
}

/// Evaluates every basis entry by raw index summation.
pub fn evaluate_basis_naive(p: &PiezoTensor) -> InvariantVector {
    let raw = build(p);
    let mut values = [0.0; BASIS_SIZE];
    for (slot, d) in values.iter_mut().zip(TABLE.iter()) {
        *slot = raw.eval(&d.expr);
    }
    InvariantVector { values }
}
