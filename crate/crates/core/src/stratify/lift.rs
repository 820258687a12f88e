use num_traits::Zero;

use super::partition::{multiplicities_of, part_of, phi, phi_inverse, SetPartition};
use super::COINCIDENCE_TOL;
use crate::critical_map::ThetaMap;
use crate::error::{Error, Result};
use crate::numeric::{Complex64, ComplexPath, ComplexPoint};

/// Continuation settings. Steps are measured as fractions of one target
/// segment. Residuals are max-norm and relative to `max(1, |target|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftOptions {
    pub coincidence: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Allowed relative mismatch between `θ(z0)` and the first target sample
    /// before the start is polished.
    pub start_tol: f64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self {
            coincidence: COINCIDENCE_TOL,
            residual_tol: 1e-10,
            max_iter: 50,
            initial_step: 1.0 / 8.0,
            min_step: 1e-12,
            start_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub path: ComplexPath,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Largest relative residual over the returned samples.
    pub max_residual: f64,
}

enum StepFailure {
    Iterations,
    Singular,
    LeftStratum,
}

/// Predictor-corrector tracker for `θ_a` in flattened coordinates.
pub struct Lifter {
    lambda: SetPartition,
    map: ThetaMap,
    opts: LiftOptions,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn lerp(a: &[Complex64], b: &[Complex64], s: f64) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x + (y - x) * s).collect()
}

impl Lifter {
    pub fn new(lambda: &SetPartition, opts: LiftOptions) -> Self {
        Self {
            lambda: lambda.clone(),
            map: ThetaMap::new(&multiplicities_of(lambda)),
            opts,
        }
    }

    fn residual(&self, y: &[Complex64], w: &[Complex64]) -> Result<f64> {
        let th = self.map.eval(y)?;
        let diff: Vec<Complex64> = th.iter().zip(w).map(|(a, b)| a - b).collect();
        Ok(max_norm(&diff) / max_norm(w).max(1.0))
    }

    /// Smallest gap between coordinates, or between a coordinate and zero.
    fn separation(y: &[Complex64]) -> f64 {
        let mut sep = f64::INFINITY;
        for (i, a) in y.iter().enumerate() {
            sep = sep.min(a.norm());
            for b in &y[i + 1..] {
                sep = sep.min((a - b).norm());
            }
        }
        sep
    }

    /// Newton on `θ_a(y) = w`. `J` stores `∂θ_j/∂y_i` at `(i, j)`, so each
    /// update solves `Jᵀ Δ = w - θ_a(y)`.
    fn correct(
        &self,
        mut y: Vec<Complex64>,
        w: &[Complex64],
        max_move: f64,
    ) -> std::result::Result<Vec<Complex64>, StepFailure> {
        let scale = max_norm(w).max(1.0);
        let mut last_update = f64::INFINITY;
        for _ in 0..=self.opts.max_iter {
            let th = self.map.eval(&y).map_err(|_| StepFailure::Singular)?;
            let rhs: Vec<Complex64> = w.iter().zip(&th).map(|(a, b)| a - b).collect();
            if max_norm(&rhs) / scale <= self.opts.residual_tol {
                return Ok(y);
            }
            let jt = self
                .map
                .jacobian(&y)
                .map_err(|_| StepFailure::Singular)?
                .transpose();
            let delta = jt.solve(&rhs).ok_or(StepFailure::Singular)?;
            let size = max_norm(&delta);
            if !size.is_finite() {
                return Err(StepFailure::Singular);
            }
            if size > max_move || size > 2.0 * last_update {
                return Err(StepFailure::LeftStratum);
            }
            last_update = size;
            for (yi, d) in y.iter_mut().zip(&delta) {
                *yi += d;
            }
            if Self::separation(&y) <= self.opts.coincidence {
                return Err(StepFailure::LeftStratum);
            }
        }
        Err(StepFailure::Iterations)
    }

    fn tangent(&self, y: &[Complex64], dw: &[Complex64]) -> Option<Vec<Complex64>> {
        if max_norm(dw).is_zero() {
            return Some(vec![Complex64::zero(); y.len()]);
        }
        self.map.jacobian(y).ok()?.transpose().solve(dw)
    }

    fn last_good(&self, y: &[Complex64]) -> ComplexPoint {
        phi_inverse(
            &self.lambda,
            &ComplexPoint::new(y.to_vec()).expect("accepted samples are finite"),
        )
        .expect("dimension matches")
    }

    pub fn lift(&self, z0: &ComplexPoint, target: &ComplexPath) -> Result<LiftReport> {
        let o = &self.opts;
        let n = self.lambda.n();
        if z0.dim() != n || target.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if z0.dim() != n {
                    z0.dim()
                } else {
                    target.dim()
                },
            });
        }
        if part_of(z0, o.coincidence) != self.lambda {
            return Err(Error::StratumMismatch);
        }
        let targets = target
            .samples()
            .iter()
            .map(|s| phi(&self.lambda, s, o.coincidence).map(ComplexPoint::into_coords))
            .collect::<Result<Vec<_>>>()?;

        let mut y = phi(&self.lambda, z0, o.coincidence)?.into_coords();
        let start_residual = self.residual(&y, &targets[0])?;
        if start_residual > o.start_tol {
            return Err(Error::InitialPointMismatch {
                residual: start_residual,
            });
        }
        y = self
            .correct(y.clone(), &targets[0], Self::separation(&y) / 4.0)
            .map_err(|_| Error::CorrectorDiverged {
                iterations: o.max_iter,
                last_good: z0.clone(),
            })?;

        let mut out = vec![self.last_good(&y)];
        let (mut accepted, mut rejected) = (0, 0);
        let mut max_residual = self.residual(&y, &targets[0])?;
        for (seg, pair) in targets.windows(2).enumerate() {
            let (w0, w1) = (&pair[0], &pair[1]);
            let dw: Vec<Complex64> = w1.iter().zip(w0).map(|(a, b)| a - b).collect();
            let mut s = 0.0;
            let mut h = o.initial_step;
            while s < 1.0 {
                let step = h.min(1.0 - s);
                let s_next = if step == 1.0 - s { 1.0 } else { s + step };
                let outcome = match self.tangent(&y, &dw) {
                    None => Err(StepFailure::Singular),
                    Some(t) => {
                        let pred: Vec<Complex64> =
                            y.iter().zip(&t).map(|(a, d)| a + d * step).collect();
                        let w = lerp(w0, w1, s_next);
                        self.correct(pred, &w, Self::separation(&y) / 4.0)
                    }
                };
                match outcome {
                    Ok(next) => {
                        y = next;
                        s = s_next;
                        accepted += 1;
                        h = (2.0 * h).min(o.initial_step);
                    }
                    Err(why) => {
                        rejected += 1;
                        h /= 2.0;
                        if h < o.min_step {
                            let last_good = self.last_good(&y);
                            return Err(match why {
                                StepFailure::Iterations => Error::CorrectorDiverged {
                                    iterations: o.max_iter,
                                    last_good,
                                },
                                _ => Error::StepUnderflow {
                                    segment: seg,
                                    min_step: o.min_step,
                                    last_good,
                                },
                            });
                        }
                    }
                }
            }
            max_residual = max_residual.max(self.residual(&y, w1)?);
            out.push(self.last_good(&y));
        }
        Ok(LiftReport {
            path: ComplexPath::new(out)?,
            accepted_steps: accepted,
            rejected_steps: rejected,
            max_residual,
        })
    }
}

/// Lift `target` through `θ_λ` starting at `z0`. The result has one sample
/// per target sample.
pub fn lift_path(
    lambda: &SetPartition,
    z0: &ComplexPoint,
    target: &ComplexPath,
    opts: &LiftOptions,
) -> Result<ComplexPath> {
    Ok(Lifter::new(lambda, *opts).lift(z0, target)?.path)
}
