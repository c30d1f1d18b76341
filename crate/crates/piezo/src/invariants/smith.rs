//! Generator set of hemitropic invariants for a family of vectors
//! `v_1..v_P` and symmetric second-order tensors `A_1..A_M`.
//!
//! The templates, enumerated in a fixed order with ascending index
//! combinations (`a < b < c` for vectors, `m < n < o` for tensors):
//!
//! ```text
//! v_a.v_a        v_a.v_b        [v_a, v_b, v_c]
//! tr A_m         tr A_m^2       tr A_m^3
//! tr A_m A_n     tr A_m^2 A_n   tr A_m A_n^2   tr A_m^2 A_n^2   tr A_m A_n A_o
//! v_a.A_m v_a    v_a.A_m^2 v_a  [v_a, A_m v_a, A_m^2 v_a]
//! v_a.eps[A_m A_n]   v_a.eps[A_m^2 A_n]   v_a.eps[A_m A_n^2]   [v_a, A_m v_a, A_n v_a]
//! v_a.A_m v_b    [v_a, v_b, A_m v_a]      [v_a, v_b, A_m v_b]
//! ```
//!
//! Identically-zero templates (for example `tr A_m` of a traceless input)
//! are still emitted; the enumeration is purely structural. For 4 vectors
//! and 5 tensors this yields 389 entries.

use crate::tensor::{eps_bracket, triple_product, Mat3, SymMat3, Vec3};

/// Enumerates every template over the given family, returning
/// `(formula id, value)` pairs in deterministic order. Ids use 1-based
/// names `v1..vP` and `A1..AM`.
pub fn evaluate_smith_generator(vectors: &[Vec3], tensors: &[SymMat3]) -> Vec<(String, f64)> {
    let p = vectors.len();
    let m = tensors.len();
    let mats: Vec<Mat3> = tensors.iter().map(|t| t.to_mat()).collect();
    let sq: Vec<Mat3> = mats.iter().map(|t| *t * *t).collect();
    let mut out = Vec::with_capacity(smith_generator_count(p, m));

    // vector block
    for a in 0..p {
        out.push((format!("v{}.v{}", a + 1, a + 1), vectors[a].dot(&vectors[a])));
    }
    for a in 0..p {
        for b in (a + 1)..p {
            out.push((format!("v{}.v{}", a + 1, b + 1), vectors[a].dot(&vectors[b])));
        }
    }
    for a in 0..p {
        for b in (a + 1)..p {
            for c in (b + 1)..p {
                out.push((
                    format!("[v{},v{},v{}]", a + 1, b + 1, c + 1),
                    triple_product(&vectors[a], &vectors[b], &vectors[c]),
                ));
            }
        }
    }

    // tensor block
    for i in 0..m {
        out.push((format!("tr(A{})", i + 1), mats[i].trace()));
    }
    for i in 0..m {
        out.push((format!("tr(A{}^2)", i + 1), sq[i].trace()));
    }
    for i in 0..m {
        out.push((format!("tr(A{}^3)", i + 1), (sq[i] * mats[i]).trace()));
    }
    for i in 0..m {
        for j in (i + 1)..m {
            out.push((format!("tr(A{} A{})", i + 1, j + 1), (mats[i] * mats[j]).trace()));
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            out.push((format!("tr(A{}^2 A{})", i + 1, j + 1), (sq[i] * mats[j]).trace()));
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            out.push((format!("tr(A{} A{}^2)", i + 1, j + 1), (mats[i] * sq[j]).trace()));
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            out.push((format!("tr(A{}^2 A{}^2)", i + 1, j + 1), (sq[i] * sq[j]).trace()));
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                out.push((
                    format!("tr(A{} A{} A{})", i + 1, j + 1, k + 1),
                    (mats[i] * mats[j] * mats[k]).trace(),
                ));
            }
        }
    }

    // one vector, one tensor
    for a in 0..p {
        for i in 0..m {
            out.push((
                format!("v{}.A{} v{}", a + 1, i + 1, a + 1),
                vectors[a].dot(&mats[i].mul_vec(&vectors[a])),
            ));
        }
    }
    for a in 0..p {
        for i in 0..m {
            out.push((
                format!("v{}.A{}^2 v{}", a + 1, i + 1, a + 1),
                vectors[a].dot(&sq[i].mul_vec(&vectors[a])),
            ));
        }
    }
    for a in 0..p {
        for i in 0..m {
            out.push((
                format!("[v{a1},A{i1} v{a1},A{i1}^2 v{a1}]", a1 = a + 1, i1 = i + 1),
                triple_product(
                    &vectors[a],
                    &mats[i].mul_vec(&vectors[a]),
                    &sq[i].mul_vec(&vectors[a]),
                ),
            ));
        }
    }

    // one vector, two tensors
    for a in 0..p {
        for i in 0..m {
            for j in (i + 1)..m {
                out.push((
                    format!("v{}.eps[A{} A{}]", a + 1, i + 1, j + 1),
                    vectors[a].dot(&eps_bracket(&(mats[i] * mats[j]))),
                ));
            }
        }
    }
    for a in 0..p {
        for i in 0..m {
            for j in (i + 1)..m {
                out.push((
                    format!("v{}.eps[A{}^2 A{}]", a + 1, i + 1, j + 1),
                    vectors[a].dot(&eps_bracket(&(sq[i] * mats[j]))),
                ));
            }
        }
    }
    for a in 0..p {
        for i in 0..m {
            for j in (i + 1)..m {
                out.push((
                    format!("v{}.eps[A{} A{}^2]", a + 1, i + 1, j + 1),
                    vectors[a].dot(&eps_bracket(&(mats[i] * sq[j]))),
                ));
            }
        }
    }
    for a in 0..p {
        for i in 0..m {
            for j in (i + 1)..m {
                out.push((
                    format!("[v{a1},A{i1} v{a1},A{j1} v{a1}]", a1 = a + 1, i1 = i + 1, j1 = j + 1),
                    triple_product(
                        &vectors[a],
                        &mats[i].mul_vec(&vectors[a]),
                        &mats[j].mul_vec(&vectors[a]),
                    ),
                ));
            }
        }
    }

    // two vectors, one tensor
    for a in 0..p {
        for b in (a + 1)..p {
            for i in 0..m {
                out.push((
                    format!("v{}.A{} v{}", a + 1, i + 1, b + 1),
                    vectors[a].dot(&mats[i].mul_vec(&vectors[b])),
                ));
            }
        }
    }
    for a in 0..p {
        for b in (a + 1)..p {
            for i in 0..m {
                out.push((
                    format!("[v{a1},v{b1},A{i1} v{a1}]", a1 = a + 1, b1 = b + 1, i1 = i + 1),
                    triple_product(
                        &vectors[a],
                        &vectors[b],
                        &mats[i].mul_vec(&vectors[a]),
                    ),
                ));
            }
        }
    }
    for a in 0..p {
        for b in (a + 1)..p {
            for i in 0..m {
                out.push((
                    format!("[v{a1},v{b1},A{i1} v{b1}]", a1 = a + 1, b1 = b + 1, i1 = i + 1),
                    triple_product(
                        &vectors[a],
                        &vectors[b],
                        &mats[i].mul_vec(&vectors[b]),
                    ),
                ));
            }
        }
    }

    debug_assert_eq!(out.len(), smith_generator_count(p, m));
    out
}

/// Closed-form count of the enumeration in [`evaluate_smith_generator`].
pub fn smith_generator_count(p: usize, m: usize) -> usize {
    let c2p = p * p.saturating_sub(1) / 2;
    let c3p = p * p.saturating_sub(1) * p.saturating_sub(2) / 6;
    let c2m = m * m.saturating_sub(1) / 2;
    let c3m = m * m.saturating_sub(1) * m.saturating_sub(2) / 6;
    // vectors: p + C(p,2) + C(p,3)
    // tensors: 3m + 4 C(m,2) + C(m,3)
    // mixed:   3 p m + 4 p C(m,2) + 3 C(p,2) m
    (p + c2p + c3p) + (3 * m + 4 * c2m + c3m) + (3 * p * m + 4 * p * c2m + 3 * c2p * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vector_emits_only_its_square() {
        let out = evaluate_smith_generator(&[Vec3::new(1.0, 2.0, 3.0)], &[]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, "v1.v1");
        assert_eq!(out[0].1, 14.0);
    }

    #[test]
    fn single_tensor_emits_three_traces() {
        let a = SymMat3::diag(1.0, 2.0, 3.0);
        let out = evaluate_smith_generator(&[], &[a]);
        let ids: Vec<&str> = out.iter().map(|(i, _)| i.as_str()).collect();
        assert_eq!(ids, ["tr(A1)", "tr(A1^2)", "tr(A1^3)"]);
        assert_eq!(out[0].1, 6.0);
        assert_eq!(out[1].1, 14.0);
        assert_eq!(out[2].1, 36.0);
    }

    #[test]
    fn intermediate_family_count() {
        // four vectors, five tensors: the family size used for the
        // nine-tensor group of a piezoelectric tensor.
        assert_eq!(smith_generator_count(4, 5), 389);
        let vectors = vec![Vec3::new(1.0, 0.0, 0.0); 4];
        let tensors = vec![SymMat3::identity(); 5];
        let out = evaluate_smith_generator(&vectors, &tensors);
        assert_eq!(out.len(), 389);
        // deterministic ordering
        let out2 = evaluate_smith_generator(&vectors, &tensors);
        assert_eq!(out, out2);
    }
}
