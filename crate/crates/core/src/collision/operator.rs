//! The Landau operator Q(g, h) in divergence and nondivergence form.

use rustfft::num_complex::Complex64;

use super::plan::{ConvolutionPlan, Which};
use crate::error::{LandauError, Result};
use crate::grid::{sym_index, Field, VelocityGrid, SYM_PAIRS};
use crate::stencil::{map_lines, LineStencil};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    #[default]
    Divergence,
    Nondivergence,
}

/// Everything in Q(g, ·) that depends on g only.
#[derive(Clone, Debug)]
pub struct Coefficients {
    grid: VelocityGrid,
    form: Form,
    /// a * g, in `SYM_PAIRS` order.
    a: Vec<Vec<f64>>,
    /// Σ_j a_ij * ∂_j g (divergence form).
    w: Vec<Vec<f64>>,
    /// zeroth-order coefficient (nondivergence form).
    c: Vec<f64>,
    plan_order: usize,
}

fn lines(src: &[f64], grid: &VelocityGrid, axis: usize, st: &LineStencil, scale: f64) -> Vec<f64> {
    let n = grid.points_per_axis();
    map_lines(src, grid.dims(), axis, n, |x, out| st.apply(x, out, scale))
}

fn to_faces(src: &[f64], grid: &VelocityGrid, axis: usize, st: &LineStencil, scale: f64) -> Vec<f64> {
    let n = grid.points_per_axis();
    map_lines(src, grid.dims(), axis, n + 1, |x, out| st.apply_shifted(x, out, scale))
}

fn mul_add(acc: &mut [Complex64], k: &[Complex64], s: &[Complex64], c: f64) {
    for ((a, k), s) in acc.iter_mut().zip(k).zip(s) {
        *a += k * s * c;
    }
}

impl Coefficients {
    pub fn new(g: &Field, plan: &ConvolutionPlan, form: Form) -> Result<Self> {
        plan.check(g)?;
        let grid = *g.grid();
        let st = plan.stencils();
        let dv = grid.spacing();
        let spec = plan.spec();
        let total = plan.padded_size().pow(3);
        let zero = || vec![Complex64::new(0.0, 0.0); total];
        match form {
            Form::Divergence => {
                let dg: Vec<Vec<f64>> = (0..3).map(|j| lines(g.values(), &grid, j, &st.d1, 1.0 / dv)).collect();
                let spectra = plan.spectra(&[g.values(), &dg[0], &dg[1], &dg[2]]);
                let mut outs = Vec::with_capacity(9);
                for &(i, j) in SYM_PAIRS.iter() {
                    let mut acc = zero();
                    mul_add(&mut acc, plan.kernel_hat(Which::A(i, j)), &spectra[0], 1.0);
                    outs.push(acc);
                }
                for i in 0..3 {
                    let mut acc = zero();
                    for j in 0..3 {
                        mul_add(&mut acc, plan.kernel_hat(Which::A(i, j)), &spectra[1 + j], 1.0);
                    }
                    outs.push(acc);
                }
                drop(spectra);
                let mut real = plan.outputs(outs);
                let w = real.split_off(6);
                Ok(Coefficients { grid, form, a: real, w, c: Vec::new(), plan_order: st.order })
            }
            Form::Nondivergence => {
                let local = spec.epsilon == 0.0;
                if local && !spec.is_coulomb() {
                    return Err(LandauError::Unsupported(
                        "nondivergence form with epsilon = 0 requires gamma = -3".into(),
                    ));
                }
                let hg = if local { Vec::new() } else { hessian10(g.values(), &grid, plan) };
                let mut inputs: Vec<&[f64]> = vec![g.values()];
                inputs.extend(hg.iter().map(|v| v.as_slice()));
                let spectra = plan.spectra(&inputs);
                let mut outs = Vec::with_capacity(7);
                for &(i, j) in SYM_PAIRS.iter() {
                    let mut acc = zero();
                    mul_add(&mut acc, plan.kernel_hat(Which::A(i, j)), &spectra[0], 1.0);
                    outs.push(acc);
                }
                if !local {
                    let mut acc = zero();
                    for (s, &(i, j)) in SYM_PAIRS.iter().enumerate() {
                        let w = if i == j { -1.0 } else { -2.0 };
                        mul_add(&mut acc, plan.kernel_hat(Which::A(i, j)), &spectra[1 + s], w);
                    }
                    outs.push(acc);
                }
                drop(spectra);
                let mut real = plan.outputs(outs);
                let c = if local {
                    g.values().iter().map(|x| 8.0 * std::f64::consts::PI * x).collect()
                } else {
                    real.pop().expect("c output")
                };
                Ok(Coefficients { grid, form, a: real, w: Vec::new(), c, plan_order: st.order })
            }
        }
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn grid(&self) -> &VelocityGrid {
        &self.grid
    }

    /// Node values of (a * g)_ij.
    pub fn a(&self, i: usize, j: usize) -> &[f64] {
        &self.a[sym_index(i, j)]
    }

    /// Largest diagonal entry of a * g over the grid.
    pub fn max_diagonal(&self) -> f64 {
        (0..3)
            .flat_map(|i| self.a[i].iter().copied())
            .fold(0.0, f64::max)
    }

    /// Q(g, h) for the g these coefficients were built from.
    pub fn apply(&self, h: &Field, plan: &ConvolutionPlan) -> Result<Field> {
        if h.grid() != &self.grid || plan.grid() != &self.grid {
            return Err(LandauError::GridMismatch);
        }
        debug_assert_eq!(plan.stencils().order, self.plan_order);
        let out = match self.form {
            Form::Divergence => self.apply_divergence(h.values(), plan),
            Form::Nondivergence => self.apply_nondivergence(h.values(), plan),
        };
        Ok(Field::from_vec(self.grid, out))
    }

    fn apply_divergence(&self, h: &[f64], plan: &ConvolutionPlan) -> Vec<f64> {
        let grid = &self.grid;
        let n = grid.points_per_axis();
        let dv = grid.spacing();
        let st = plan.stencils();
        let dh: Vec<Vec<f64>> = (0..3).map(|j| lines(h, grid, j, &st.d1, 1.0 / dv)).collect();
        let mut q = vec![0.0; grid.len()];
        for i in 0..3 {
            let interp = |x: &[f64]| to_faces(x, grid, i, &st.face_interp, 1.0);
            let mut flux = to_faces(h, grid, i, &st.face_d1, 1.0 / dv);
            let ai = interp(&self.a[sym_index(i, i)]);
            for (f, a) in flux.iter_mut().zip(&ai) {
                *f *= a;
            }
            for j in (0..3).filter(|&j| j != i) {
                let aij = interp(&self.a[sym_index(i, j)]);
                let dj = interp(&dh[j]);
                for ((f, a), d) in flux.iter_mut().zip(&aij).zip(&dj) {
                    *f += a * d;
                }
            }
            let wi = interp(&self.w[i]);
            let hi = interp(h);
            for ((f, w), x) in flux.iter_mut().zip(&wi).zip(&hi) {
                *f -= w * x;
            }
            let mut fdims = grid.dims();
            fdims[i] = n + 1;
            let faces = map_lines(&flux, fdims, i, n + 1, |x, out| {
                let mut y = x.to_vec();
                y[0] = 0.0;
                y[n] = 0.0;
                st.flux.apply(&y, out, 1.0);
                out[0] = 0.0;
                out[n] = 0.0;
            });
            let div = map_lines(&faces, fdims, i, n, |x, out| {
                for c in 0..n {
                    out[c] = (x[c + 1] - x[c]) / dv;
                }
            });
            for (q, d) in q.iter_mut().zip(&div) {
                *q += d;
            }
        }
        q
    }

    fn apply_nondivergence(&self, h: &[f64], plan: &ConvolutionPlan) -> Vec<f64> {
        let hh = hessian10(h, &self.grid, plan);
        let mut q: Vec<f64> = self.c.iter().zip(h).map(|(c, h)| c * h).collect();
        for (s, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            let w = if i == j { 1.0 } else { 2.0 };
            for ((q, a), d) in q.iter_mut().zip(&self.a[s]).zip(&hh[s]) {
                *q += w * a * d;
            }
        }
        q
    }
}

/// Second derivatives with the operator stencils, in `SYM_PAIRS` order.
fn hessian10(x: &[f64], grid: &VelocityGrid, plan: &ConvolutionPlan) -> Vec<Vec<f64>> {
    let st = plan.stencils();
    let dv = grid.spacing();
    let d: Vec<Vec<f64>> = (0..3).map(|j| lines(x, grid, j, &st.d1, 1.0 / dv)).collect();
    SYM_PAIRS
        .iter()
        .map(|&(i, j)| {
            if i == j {
                lines(x, grid, i, &st.d2, 1.0 / (dv * dv))
            } else {
                lines(&d[j], grid, i, &st.d1, 1.0 / dv)
            }
        })
        .collect()
}

/// ∂_axis x with the operator's centered first-derivative stencil.
pub fn operator_derivative(x: &Field, axis: usize, plan: &ConvolutionPlan) -> Field {
    let grid = x.grid();
    let d = lines(x.values(), grid, axis, &plan.stencils().d1, 1.0 / grid.spacing());
    Field::from_vec(*grid, d)
}

/// Q(g, h) in the requested form.
pub fn landau_q(g: &Field, h: &Field, plan: &ConvolutionPlan, form: Form) -> Result<Field> {
    g.same_grid(h)?;
    Coefficients::new(g, plan, form)?.apply(h, plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::kernel::KernelSpec;
    use crate::grid::{build_grid, reference_maxwellian, sample_maxwellian};

    fn mixture(g: &VelocityGrid) -> Field {
        let a = sample_maxwellian(g, 0.6, [0.8, -0.3, 0.2], 0.7).unwrap();
        let b = sample_maxwellian(g, 0.4, [-1.0, 0.5, -0.2], 1.2).unwrap();
        a.add(&b).unwrap()
    }

    #[test]
    fn mass_conserved_exactly_by_divergence_form() {
        let g = build_grid(4.0, 16).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
        let f = mixture(&g);
        let q = landau_q(&f, &f, &plan, Form::Divergence).unwrap();
        assert!(q.integral().abs() < 1e-13 * q.max_abs());
    }

    #[test]
    fn bilinear() {
        let g = build_grid(4.0, 16).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::default_for_spacing(g.spacing()));
        let f = mixture(&g);
        let m = reference_maxwellian(&g);
        for form in [Form::Divergence, Form::Nondivergence] {
            let lhs = landau_q(&f, &f.scale(2.0).axpy(-1.0, &m).unwrap(), &plan, form).unwrap();
            let rhs = landau_q(&f, &f, &plan, form)
                .unwrap()
                .scale(2.0)
                .axpy(-1.0, &landau_q(&f, &m, &plan, form).unwrap())
                .unwrap();
            let err = lhs.sub(&rhs).unwrap().l2() / rhs.l2();
            assert!(err < 1e-12, "{form:?}: {err}");
        }
    }

    #[test]
    fn unsupported_soft_local_form() {
        let g = build_grid(4.0, 8).unwrap();
        let plan = ConvolutionPlan::new(g, KernelSpec::new(0.0, -2.0).unwrap());
        let m = reference_maxwellian(&g);
        assert!(matches!(
            landau_q(&m, &m, &plan, Form::Nondivergence),
            Err(LandauError::Unsupported(_))
        ));
        assert!(landau_q(&m, &m, &plan, Form::Divergence).is_ok());
    }
}
