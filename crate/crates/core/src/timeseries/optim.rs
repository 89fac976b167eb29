//! Derivative-free Nelder-Mead simplex minimizer.
//!
//! Small and deterministic; used by the CSS ARIMA fitter and the
//! Holt-Winters smoothing-weight search.

/// Result of a simplex run.
pub struct SimplexOutcome {
    pub best: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` starting from `start`, with per-dimension initial steps.
///
/// Stops when the simplex diameter falls below `diameter_tol` or after
/// `max_iterations` reflect/expand/contract cycles.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    steps: &[f64],
    max_iterations: usize,
    diameter_tol: f64,
) -> SimplexOutcome {
    let dim = start.len();
    if dim == 0 {
        let v = f(start);
        return SimplexOutcome { best: Vec::new(), best_value: v, iterations: 0, converged: true };
    }

    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(start.to_vec());
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += steps[i];
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let diameter = |simplex: &[Vec<f64>]| -> f64 {
        let mut d: f64 = 0.0;
        for i in 1..simplex.len() {
            let dist: f64 = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d = d.max(dist);
        }
        d
    };

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        iterations += 1;

        // Order best..worst.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        if diameter(&simplex) < diameter_tol {
            converged = true;
            break;
        }

        // Centroid of all but the worst.
        let mut centroid = vec![0.0; dim];
        for p in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / dim as f64;
            }
        }

        let worst = values[dim];
        let second_worst = values[dim - 1];
        let best = values[0];

        let blend = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = blend(ALPHA);
        let fr = f(&reflected);
        if fr < best {
            let expanded = blend(GAMMA);
            let fe = f(&expanded);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < second_worst {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        // Contract toward the better of worst/reflected.
        let contracted = if fr < worst { blend(RHO) } else { blend(-RHO) };
        let fc = f(&contracted);
        if fc < worst.min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        // Shrink toward the best point.
        for i in 1..=dim {
            let point: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, p)| b + SIGMA * (p - b))
                .collect();
            values[i] = f(&point);
            simplex[i] = point;
        }
    }

    let mut best_idx = 0;
    for i in 1..=dim {
        if values[i] < values[best_idx] {
            best_idx = i;
        }
    }
    SimplexOutcome {
        best: simplex[best_idx].clone(),
        best_value: values[best_idx],
        iterations,
        converged: converged || diameter(&simplex) < diameter_tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn minimizes_shifted_quadratic() {
        let out = nelder_mead(
            |x| (x[0] - 3.0).powi(2) + 2.0 * (x[1] + 1.5).powi(2),
            &[0.0, 0.0],
            &[0.1, 0.1],
            2000,
            1e-10,
        );
        assert!(out.converged);
        assert_abs_diff_eq!(out.best[0], 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(out.best[1], -1.5, epsilon = 1e-6);
    }

    #[test]
    fn minimizes_rosenbrock_reasonably() {
        let out = nelder_mead(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &[0.1, 0.1],
            5000,
            1e-12,
        );
        assert_abs_diff_eq!(out.best[0], 1.0, epsilon = 1e-4);
        assert_abs_diff_eq!(out.best[1], 1.0, epsilon = 1e-4);
    }

    #[test]
    fn zero_dimensional_problem_is_trivial() {
        let out = nelder_mead(|_| 7.5, &[], &[], 10, 1e-8);
        assert!(out.converged);
        assert_eq!(out.best_value, 7.5);
    }
}
