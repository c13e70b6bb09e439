//! Global minimization of a real function over a closed disk: a polar grid
//! clustered towards the boundary, then a Nelder–Mead polish in `(r, θ)`.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;

use crate::jet::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSearch {
    pub radius_cap: f64,
    pub radii: usize,
    pub angles: usize,
    pub refine_iters: usize,
}

impl Default for GridSearch {
    fn default() -> Self {
        Self {
            radius_cap: 1.0 - 1e-4,
            radii: 256,
            angles: 512,
            refine_iters: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// Best value after refinement.
    pub value: f64,
    pub witness: C64,
    /// Best value on the grid alone.
    pub grid_value: f64,
    /// Number of grid points evaluated successfully.
    pub evaluated: usize,
}

impl GridSearch {
    pub fn with_radius_cap(mut self, radius_cap: f64) -> Self {
        self.radius_cap = radius_cap;
        self
    }

    /// Radius of grid ring `i`: `cap · sin(π i / 2(N−1))`, so rings crowd
    /// towards the boundary; ring 0 is the origin and the last ring the cap.
    pub fn radius(&self, i: usize) -> f64 {
        if self.radii <= 1 {
            return 0.0;
        }
        self.radius_cap * (FRAC_PI_2 * i as f64 / (self.radii - 1) as f64).sin()
    }

    fn point(&self, r: f64, theta: f64) -> C64 {
        C64::from_polar(r.clamp(0.0, self.radius_cap), theta)
    }

    /// Minimizes `f`; points where `f` returns `None` are skipped. Returns
    /// `None` when no grid point could be evaluated.
    pub fn minimize(&self, f: impl Fn(C64) -> Option<f64> + Sync) -> Option<Extremum> {
        let eval = |z: C64| f(z).filter(|v| !v.is_nan());
        let (grid_value, ri, ti, evaluated) = (0..self.radii)
            .into_par_iter()
            .map(|i| {
                let r = self.radius(i);
                let mut best = (f64::INFINITY, i, 0usize, 0usize);
                // the origin is a single point
                let angles = if r == 0.0 { 1 } else { self.angles };
                for j in 0..angles {
                    let theta = TAU * j as f64 / self.angles as f64;
                    if let Some(v) = eval(self.point(r, theta)) {
                        best.3 += 1;
                        if v < best.0 {
                            best = (v, i, j, best.3);
                        }
                    }
                }
                best
            })
            .reduce(
                || (f64::INFINITY, usize::MAX, 0, 0),
                |a, b| {
                    let count = a.3 + b.3;
                    let pick = if (b.0, b.1, b.2) < (a.0, a.1, a.2) {
                        b
                    } else {
                        a
                    };
                    (pick.0, pick.1, pick.2, count)
                },
            );
        if evaluated == 0 || ri == usize::MAX {
            return None;
        }
        let r0 = self.radius(ri);
        let t0 = TAU * ti as f64 / self.angles as f64;
        let dr = (self.radius(ri.min(self.radii - 2) + 1) - self.radius(ri.min(self.radii - 2)))
            .max(1e-9);
        let dt = TAU / self.angles as f64;
        let objective = |x: [f64; 2]| eval(self.point(x[0], x[1])).unwrap_or(f64::INFINITY);
        let (best_x, best_v) = nelder_mead(objective, [r0, t0], [dr, dt], self.refine_iters);
        let (value, witness) = if best_v < grid_value {
            (best_v, self.point(best_x[0], best_x[1]))
        } else {
            (grid_value, self.point(r0, t0))
        };
        Some(Extremum {
            value,
            witness,
            grid_value,
            evaluated,
        })
    }

    /// Maximizes `f`, with the same conventions as [`GridSearch::minimize`].
    pub fn maximize(&self, f: impl Fn(C64) -> Option<f64> + Sync) -> Option<Extremum> {
        self.minimize(|z| f(z).map(|v| -v)).map(|e| Extremum {
            value: -e.value,
            grid_value: -e.grid_value,
            ..e
        })
    }
}

/// Nelder–Mead in two variables with standard coefficients. Returns the best
/// point ever evaluated.
pub fn nelder_mead(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    step: [f64; 2],
    iters: usize,
) -> ([f64; 2], f64) {
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = simplex.map(&f);
    let add =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..iters {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let centroid = [
            (simplex[0][0] + simplex[1][0]) / 2.0,
            (simplex[0][1] + simplex[1][1]) / 2.0,
        ];
        let worst = simplex[2];
        let reflected = add(centroid, worst, -1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = add(centroid, worst, -2.0);
            let fe = f(expanded);
            if fe < fr {
                (simplex[2], values[2]) = (expanded, fe);
            } else {
                (simplex[2], values[2]) = (reflected, fr);
            }
        } else if fr < values[1] {
            (simplex[2], values[2]) = (reflected, fr);
        } else {
            let contracted = if fr < values[2] {
                add(centroid, reflected, 0.5)
            } else {
                add(centroid, worst, 0.5)
            };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                (simplex[2], values[2]) = (contracted, fc);
            } else {
                for k in 1..3 {
                    simplex[k] = add(simplex[0], simplex[k], 0.5);
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .unwrap_or(0);
    (simplex[best], values[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let (x, v) = nelder_mead(
            |p| (p[0] - 0.3).powi(2) + 2.0 * (p[1] + 0.1).powi(2),
            [0.0, 0.0],
            [0.1, 0.1],
            200,
        );
        assert!((x[0] - 0.3).abs() < 1e-6 && (x[1] + 0.1).abs() < 1e-6 && v < 1e-11);
    }

    #[test]
    fn grid_includes_the_cap_and_the_negative_axis() {
        let g = GridSearch::default();
        assert_eq!(g.radius(0), 0.0);
        assert!((g.radius(g.radii - 1) - g.radius_cap).abs() < 1e-15);
        let e = g
            .minimize(|z| Some((z - C64::new(-g.radius_cap, 0.0)).norm()))
            .unwrap();
        assert!(e.value < 1e-12);
    }

    #[test]
    fn refinement_only_improves() {
        let target = C64::new(0.4123, -0.2711);
        let g = GridSearch {
            radii: 16,
            angles: 32,
            ..GridSearch::default()
        };
        let e = g.minimize(|z| Some((z - target).norm_sqr())).unwrap();
        assert!(e.value <= e.grid_value);
        assert!((e.witness - target).norm() < 1e-4);
        let m = g.maximize(|z| Some(-(z - target).norm_sqr())).unwrap();
        assert!(m.value >= m.grid_value && m.value > -1e-8);
    }

    #[test]
    fn failures_are_skipped() {
        let g = GridSearch {
            radii: 8,
            angles: 8,
            ..GridSearch::default()
        };
        assert!(g.minimize(|_| None).is_none());
        let e = g.minimize(|z| (z.re > 0.0).then_some(z.re)).unwrap();
        assert!(e.value >= 0.0);
    }
}
