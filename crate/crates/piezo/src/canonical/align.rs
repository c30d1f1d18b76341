//! Numerical SO(3)-alignment of two piezoelectric tensors and the
//! constrained maximizer of a cubic form on the unit sphere.
//!
//! Both are multi-start local searches: alignment runs derivative-free
//! Nelder-Mead in a 3-parameter chart of the rotation group around each
//! start, the cubic maximizer runs a shifted power iteration. Starts mix a
//! fixed quaternion grid with seeded Haar draws, so results are
//! deterministic.

use crate::error::Error;
use crate::tensor::{sample, Harm3, PiezoTensor, Rotate, Rotation, Vec3};
use rand::Rng;

/// Fixed coarse cover of the rotation group: identity, half-turns about
/// the axes, quarter-turns about the axes, and the eight (1, ±1, ±1, ±1)/2
/// quaternions.
const GRID: [[f64; 4]; 16] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.5, 0.5, 0.5, 0.5],
    [0.5, 0.5, 0.5, -0.5],
    [0.5, 0.5, -0.5, 0.5],
    [0.5, 0.5, -0.5, -0.5],
    [0.5, -0.5, 0.5, 0.5],
    [0.5, -0.5, 0.5, -0.5],
    [0.5, -0.5, -0.5, 0.5],
    [0.5, -0.5, -0.5, -0.5],
    [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0],
    [std::f64::consts::FRAC_1_SQRT_2, 0.0, std::f64::consts::FRAC_1_SQRT_2, 0.0],
    [std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0, std::f64::consts::FRAC_1_SQRT_2],
    [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0],
];

/// Seed of the random half of the start set.
const START_SEED: u64 = 0x7072_6f70_6572;

fn quat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    let [aw, ax, ay, az] = a;
    let [bw, bx, by, bz] = b;
    [
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ]
}

/// Axis-angle vector to unit quaternion.
fn quat_exp(x: [f64; 3]) -> [f64; 4] {
    let angle = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if angle < 1e-300 {
        return [1.0, 0.0, 0.0, 0.0];
    }
    let (s, c) = (0.5 * angle).sin_cos();
    let k = s / angle;
    [c, k * x[0], k * x[1], k * x[2]]
}

/// Nelder-Mead on a 3-parameter rotation chart centered at `q0`.
fn nelder_mead<F: Fn([f64; 4]) -> f64>(f: &F, q0: [f64; 4], scale: f64, iters: usize) -> ([f64; 4], f64) {
    let eval = |x: [f64; 3]| f(quat_mul(q0, quat_exp(x)));
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push(([0.0; 3], eval([0.0; 3])));
    for i in 0..3 {
        let mut x = [0.0; 3];
        x[i] = scale;
        simplex.push((x, eval(x)));
    }
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[3].1 - simplex[0].1;
        let size: f64 = (0..3)
            .map(|i| {
                (simplex[3].0[i] - simplex[0].0[i]).abs()
                    + (simplex[2].0[i] - simplex[0].0[i]).abs()
            })
            .sum();
        if spread <= 1e-30 && size <= 1e-12 {
            break;
        }
        let centroid = {
            let mut c = [0.0; 3];
            for v in &simplex[..3] {
                for i in 0..3 {
                    c[i] += v.0[i] / 3.0;
                }
            }
            c
        };
        let worst = simplex[3];
        let shifted = |t: f64| {
            let mut x = [0.0; 3];
            for i in 0..3 {
                x[i] = centroid[i] + t * (centroid[i] - worst.0[i]);
            }
            x
        };
        let xr = shifted(1.0);
        let fr = eval(xr);
        if fr < simplex[0].1 {
            let xe = shifted(2.0);
            let fe = eval(xe);
            simplex[3] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[2].1 {
            simplex[3] = (xr, fr);
        } else {
            let xc = shifted(if fr < worst.1 { 0.5 } else { -0.5 });
            let fc = eval(xc);
            if fc < worst.1.min(fr) {
                simplex[3] = (xc, fc);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    for i in 0..3 {
                        v.0[i] = best[i] + 0.5 * (v.0[i] - best[i]);
                    }
                    v.1 = eval(v.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    (quat_mul(q0, quat_exp(simplex[0].0)), simplex[0].1)
}

/// Finds the rotation minimizing the Frobenius distance from the rotated
/// first tensor to the second, by multi-start local descent over the unit
/// quaternions. Returns the best rotation and the residual distance.
///
/// Deterministic: starts come from a fixed grid plus draws from a fixed
/// internal seed. `starts` below 1 is an error; the default used by the
/// command-line tool is 32 (16 grid + 16 random).
pub fn align(p1: &PiezoTensor, p2: &PiezoTensor, starts: usize) -> Result<(Rotation, f64), Error> {
    if starts == 0 {
        return Err(Error::InvalidArgument("starts must be at least 1".into()));
    }
    let t2 = p2.to_tensor3();
    let objective = |q: [f64; 4]| {
        let r = Rotation::from_quaternion(q);
        (p1.rotate(&r).to_tensor3() - t2).norm()
    };
    let mut rng = sample::rng(START_SEED);
    let mut start_list: Vec<[f64; 4]> = Vec::with_capacity(starts);
    for q in GRID.iter().take(starts.min(GRID.len())) {
        start_list.push(*q);
    }
    while start_list.len() < starts {
        let mut q = [0.0; 4];
        for x in q.iter_mut() {
            *x = rng.sample::<f64, _>(rand_distr::StandardNormal);
        }
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in q.iter_mut() {
            *x /= n;
        }
        start_list.push(q);
    }

    let mut best_q = [1.0, 0.0, 0.0, 0.0];
    let mut best = objective(best_q);
    for q0 in start_list {
        // coarse descent then a tight polish pass around the found point
        let (q1, _) = nelder_mead(&objective, q0, 0.4, 300);
        let (q2, f2) = nelder_mead(&objective, q1, 1e-4, 200);
        let (q3, f3) = nelder_mead(&objective, q2, 1e-8, 120);
        let (q, f) = if f3 < f2 { (q3, f3) } else { (q2, f2) };
        if f < best {
            best = f;
            best_q = q;
        }
    }
    Ok((Rotation::from_quaternion(best_q), best))
}

/// Fixed direction cover for the cubic-form maximizer: axes and diagonal
/// directions (sign patterns matter because the form is odd).
fn direction_grid() -> Vec<Vec3> {
    let mut dirs = Vec::new();
    for i in 0..3 {
        dirs.push(Vec3::basis(i));
        dirs.push(-Vec3::basis(i));
    }
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                dirs.push(Vec3::new(sx, sy, sz).scale(1.0 / 3.0f64.sqrt()));
            }
        }
    }
    dirs
}

/// Maximizes the cubic form f(x) = A_ijk x_i x_j x_k over the unit sphere
/// by a shifted power iteration from a deterministic multi-start set.
///
/// The returned point is a first-order stationary ascent point: the
/// residual `|3 A x x - lambda x|` with `lambda = 3 f(x)` is driven to
/// machine precision. Fails on the zero tensor, whose form has no
/// maximizer.
pub fn cubic_form_argmax(a: &Harm3) -> Result<Vec3, Error> {
    let norm = a.norm();
    if norm == 0.0 {
        return Err(Error::ZeroTensor);
    }
    // Shift large enough to make the iteration monotone for a cubic form.
    let alpha = 2.0 * norm;
    let mut starts = direction_grid();
    let mut rng = sample::rng(START_SEED ^ 0xc0ffee);
    for _ in 0..16 {
        starts.push(sample::vec3(&mut rng).normalized());
    }
    let mut best_x = Vec3::basis(0);
    let mut best_f = f64::NEG_INFINITY;
    for x0 in starts {
        let mut x = x0;
        for _ in 0..2000 {
            let y = a.apply_twice(&x) + x.scale(alpha);
            let n = y.norm();
            if n < 1e-300 {
                break;
            }
            let next = y.scale(1.0 / n);
            let step = (next - x).norm();
            x = next;
            if step < 1e-16 {
                break;
            }
        }
        let f = a.cubic_form(&x);
        if f > best_f {
            best_f = f;
            best_x = x;
        }
    }
    Ok(best_x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{sample, Harm3, Rotate, Rotation, Vec3};

    #[test]
    fn align_identical_tensors() {
        let mut rng = sample::rng(70);
        let p = sample::piezo(&mut rng);
        let (_, res) = align(&p, &p, 4).unwrap();
        assert!(res <= 1e-10 * p.norm(), "residual {res}");
    }

    #[test]
    fn align_recovers_a_known_rotation() {
        let mut rng = sample::rng(71);
        for _ in 0..5 {
            let p = sample::piezo(&mut rng);
            let g0 = Rotation::haar(&mut rng);
            let q = p.rotate(&g0);
            let (g, res) = align(&p, &q, 32).unwrap();
            assert!(res <= 1e-6 * p.norm(), "residual {res}");
            let dev = (p.rotate(&g).to_tensor3() - q.to_tensor3()).norm();
            assert!(dev <= 1e-6 * p.norm());
        }
    }

    #[test]
    fn align_rejects_zero_starts() {
        let p = PiezoTensor::ZERO;
        assert!(align(&p, &p, 0).is_err());
    }

    #[test]
    fn argmax_of_axisymmetric_form() {
        // d1(0,0,-1) has f(e1) = 2, the global maximum.
        let a = Harm3::d1(0.0, 0.0, -1.0);
        let x = cubic_form_argmax(&a).unwrap();
        assert!((a.cubic_form(&x) - 2.0).abs() < 1e-10);
        // first-order condition: 3 A x x = lambda x with lambda = 3 f
        let grad = a.apply_twice(&x).scale(3.0);
        let lambda = 3.0 * a.cubic_form(&x);
        assert!((grad - x.scale(lambda)).norm() < 1e-9);
    }

    #[test]
    fn argmax_beats_random_sampling() {
        let mut rng = sample::rng(72);
        let a = sample::harm3(&mut rng);
        let x = cubic_form_argmax(&a).unwrap();
        let fx = a.cubic_form(&x);
        for _ in 0..10_000 {
            let y = sample::vec3(&mut rng).normalized();
            assert!(a.cubic_form(&y) <= fx + 1e-9 * a.norm());
        }
        assert!((x.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn argmax_value_is_rotation_equivariant() {
        let mut rng = sample::rng(73);
        for _ in 0..5 {
            let a = sample::harm3(&mut rng);
            let g = Rotation::haar(&mut rng);
            let f1 = a.cubic_form(&cubic_form_argmax(&a).unwrap());
            let f2 = a.rotate(&g).cubic_form(&cubic_form_argmax(&a.rotate(&g)).unwrap());
            assert!((f1 - f2).abs() <= 1e-7 * a.norm().max(1.0), "{f1} vs {f2}");
        }
    }

    #[test]
    fn argmax_rejects_zero() {
        assert!(matches!(
            cubic_form_argmax(&Harm3::ZERO),
            Err(crate::error::Error::ZeroTensor)
        ));
    }

    #[test]
    fn quat_helpers_consistent() {
        // quaternion exponential of zero is the identity
        assert_eq!(quat_exp([0.0; 3]), [1.0, 0.0, 0.0, 0.0]);
        // composing a rotation with its inverse via quaternions
        let q = [0.3, -0.5, 0.7, 0.4];
        let n: f64 = q.iter().map(|x| x * x).sum::<f64>();
        let conj = [q[0], -q[1], -q[2], -q[3]];
        let prod = quat_mul(q, conj);
        assert!((prod[0] - n).abs() < 1e-12);
        assert!(prod[1].abs() + prod[2].abs() + prod[3].abs() < 1e-12);
    }

    use crate::tensor::PiezoTensor;
}
