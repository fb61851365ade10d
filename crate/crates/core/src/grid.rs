//! Truncated cell-centered velocity grid, discrete fields, quadrature and derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};
use crate::par;
use crate::stencil::{fornberg, map_lines};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocityGrid {
    l: f64,
    n: usize,
    dv: f64,
}

impl VelocityGrid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(LandauError::Config(format!("L must be positive, got {l}")));
        }
        if n % 2 != 0 {
            return Err(LandauError::Config("N must be even".into()));
        }
        if n < 8 {
            return Err(LandauError::Config(format!("N must be at least 8, got {n}")));
        }
        Ok(VelocityGrid {
            l,
            n,
            dv: 2.0 * l / n as f64,
        })
    }

    pub fn extent(&self) -> f64 {
        self.l
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.dv
    }

    pub fn cell_volume(&self) -> f64 {
        self.dv * self.dv * self.dv
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.n; 3]
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        -self.l + (i as f64 + 0.5) * self.dv
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    #[inline]
    pub fn velocity(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        [self.node(c[0]), self.node(c[1]), self.node(c[2])]
    }

    /// Japanese bracket ⟨v⟩ = (1+|v|²)^{1/2} at a node.
    #[inline]
    pub fn bracket(&self, idx: usize) -> f64 {
        let v = self.velocity(idx);
        (1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
    }

    /// ⟨v⟩^l sampled on the grid.
    pub fn weight(&self, l: f64) -> Vec<f64> {
        (0..self.len()).map(|i| self.bracket(i).powf(l)).collect()
    }
}

pub fn build_grid(l: f64, n: usize) -> Result<VelocityGrid> {
    VelocityGrid::new(l, n)
}

/// Scalar distribution sampled at the grid nodes, immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: VelocityGrid,
    values: Vec<f64>,
    nonnegative: bool,
}

impl Field {
    pub fn new(grid: VelocityGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LandauError::Input(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(p) = values.iter().position(|x| !x.is_finite()) {
            return Err(LandauError::Domain(format!("non-finite value at index {p}")));
        }
        let nonnegative = values.iter().all(|&x| x >= 0.0);
        Ok(Field {
            grid,
            values,
            nonnegative,
        })
    }

    /// Construction for values already known to be finite.
    pub(crate) fn from_vec(grid: VelocityGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        let nonnegative = values.iter().all(|&x| x >= 0.0);
        Field {
            grid,
            values,
            nonnegative,
        }
    }

    pub fn zeros(grid: VelocityGrid) -> Self {
        Field::from_vec(grid, vec![0.0; grid.len()])
    }

    pub fn from_fn<F: Fn([f64; 3]) -> f64>(grid: VelocityGrid, f: F) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.velocity(i))).collect();
        Field::new(grid, values)
    }

    pub fn grid(&self) -> &VelocityGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    pub fn same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(LandauError::GridMismatch)
        }
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Field {
        Field::from_vec(self.grid, self.values.iter().map(|&x| f(x)).collect())
    }

    pub fn zip_map<F: Fn(f64, f64) -> f64>(&self, other: &Field, f: F) -> Result<Field> {
        self.same_grid(other)?;
        Ok(Field::from_vec(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: f64) -> Field {
        self.map(|x| c * x)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a - b)
    }

    /// `self + c·other`
    pub fn axpy(&self, c: f64, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a + c * b)
    }

    /// Pointwise product with a grid-sized weight array.
    pub fn weighted(&self, w: &[f64]) -> Field {
        Field::from_vec(
            self.grid,
            self.values.iter().zip(w).map(|(&a, &b)| a * b).collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Midpoint quadrature ∫ f dv.
    pub fn integral(&self) -> f64 {
        par::sum(&self.values) * self.grid.cell_volume()
    }

    /// ∫ f g dv.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.same_grid(other)?;
        Ok(par::dot(&self.values, &other.values) * self.grid.cell_volume())
    }

    pub fn l2(&self) -> f64 {
        (par::dot(&self.values, &self.values) * self.grid.cell_volume()).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluidMoments {
    pub rho: f64,
    pub u: [f64; 3],
    /// `None` when rho ≤ 0.
    pub temperature: Option<f64>,
}

pub fn sample_maxwellian(grid: &VelocityGrid, rho: f64, u: [f64; 3], t: f64) -> Result<Field> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(LandauError::Domain(format!("temperature must be positive, got {t}")));
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(LandauError::Domain(format!("density must be nonnegative, got {rho}")));
    }
    let c = rho / (2.0 * std::f64::consts::PI * t).powf(1.5);
    Field::from_fn(*grid, |v| {
        let r2 = (v[0] - u[0]).powi(2) + (v[1] - u[1]).powi(2) + (v[2] - u[2]).powi(2);
        c * (-r2 / (2.0 * t)).exp()
    })
}

/// The reference Maxwellian μ = (2π)^{-3/2} exp(-|v|²/2).
pub fn reference_maxwellian(grid: &VelocityGrid) -> Field {
    sample_maxwellian(grid, 1.0, [0.0; 3], 1.0).expect("unit Maxwellian")
}

pub fn moments(f: &Field) -> FluidMoments {
    let g = f.grid();
    let vals = f.values();
    let s = par::sums_by::<5, _>(g.len(), |i| {
        let v = g.velocity(i);
        let x = vals[i];
        [x, x * v[0], x * v[1], x * v[2], x * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2])]
    });
    let dv3 = g.cell_volume();
    let rho = s[0] * dv3;
    if rho <= 0.0 {
        return FluidMoments {
            rho,
            u: [0.0; 3],
            temperature: None,
        };
    }
    let u = [s[1] * dv3 / rho, s[2] * dv3 / rho, s[3] * dv3 / rho];
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    // ∫|v-u|² f = ∫|v|² f - ρ|u|²
    let t = (s[4] * dv3 - rho * u2) / (3.0 * rho);
    FluidMoments {
        rho,
        u,
        temperature: Some(t),
    }
}

/// ∫ f ⟨v⟩^l dv.
pub fn weighted_integral(f: &Field, l: f64) -> f64 {
    let g = f.grid();
    let vals = f.values();
    par::sum_by(g.len(), |i| vals[i] * g.bracket(i).powf(l)) * g.cell_volume()
}

/// Per-position weights of the 4th-order first and second derivative with one-sided rows
/// within two cells of either end.
struct BoundaryStencils {
    d1: Vec<(isize, Vec<f64>)>,
    d2: Vec<(isize, Vec<f64>)>,
}

impl BoundaryStencils {
    fn new() -> Self {
        // Rows for i = 0, 1 (forward). Mirrored rows handle the far end.
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        let p5: Vec<f64> = (0..5).map(|x| x as f64).collect();
        let p6: Vec<f64> = (0..6).map(|x| x as f64).collect();
        for i in 0..2 {
            d1.push((i as isize, fornberg(i as f64, &p5, 1)[1].clone()));
            d2.push((i as isize, fornberg(i as f64, &p6, 2)[2].clone()));
        }
        BoundaryStencils { d1, d2 }
    }
}

fn deriv_line(x: &[f64], out: &mut [f64], order: usize, bs: &BoundaryStencils, h: f64) {
    // Written on differences x_j - x_i so that constants are annihilated exactly.
    let n = x.len();
    let scale = 1.0 / h.powi(order as i32);
    let rows = if order == 1 { &bs.d1 } else { &bs.d2 };
    for i in 0..n {
        let v = if i >= 2 && i + 2 < n {
            if order == 1 {
                (8.0 * (x[i + 1] - x[i - 1]) - (x[i + 2] - x[i - 2])) / 12.0
            } else {
                let c = x[i];
                (16.0 * ((x[i - 1] - c) + (x[i + 1] - c)) - ((x[i - 2] - c) + (x[i + 2] - c))) / 12.0
            }
        } else if i < 2 {
            let w = &rows[i].1;
            w.iter().enumerate().map(|(j, &c)| c * (x[j] - x[i])).sum()
        } else {
            let r = n - 1 - i;
            let w = &rows[r].1;
            let sign = if order == 1 { -1.0 } else { 1.0 };
            sign * w
                .iter()
                .enumerate()
                .map(|(j, &c)| c * (x[n - 1 - j] - x[i]))
                .sum::<f64>()
        };
        out[i] = v * scale;
    }
}

/// First (`order = 1`) or second (`order = 2`) derivative along one axis, 4th order.
pub fn axis_derivative(f: &Field, axis: usize, order: usize) -> Field {
    assert!(order == 1 || order == 2, "derivative order must be 1 or 2");
    let g = *f.grid();
    let bs = BoundaryStencils::new();
    let h = g.spacing();
    let vals = map_lines(f.values(), g.dims(), axis, g.points_per_axis(), |x, out| {
        deriv_line(x, out, order, &bs, h)
    });
    Field::from_vec(g, vals)
}

/// 4th-order gradient with one-sided boundary rows.
pub fn gradient(f: &Field) -> [Field; 3] {
    [
        axis_derivative(f, 0, 1),
        axis_derivative(f, 1, 1),
        axis_derivative(f, 2, 1),
    ]
}

/// Second derivatives; mixed entries are computed once and shared, so ∂_ij ≡ ∂_ji.
#[derive(Clone, Debug)]
pub struct Hessian {
    /// xx, yy, zz, xy, xz, yz
    pub comps: [Field; 6],
}

impl Hessian {
    pub fn get(&self, i: usize, j: usize) -> &Field {
        &self.comps[sym_index(i, j)]
    }
}

/// Packed index of a symmetric 3×3 entry: xx, yy, zz, xy, xz, yz.
#[inline]
pub fn sym_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        (1, 2) => 5,
        _ => panic!("symmetric index out of range"),
    }
}

/// (i, j) pairs in packed order.
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

pub fn hessian(f: &Field) -> Hessian {
    let grad = gradient(f);
    let xy = axis_derivative(&grad[1], 0, 1);
    let xz = axis_derivative(&grad[2], 0, 1);
    let yz = axis_derivative(&grad[2], 1, 1);
    Hessian {
        comps: [
            axis_derivative(f, 0, 2),
            axis_derivative(f, 1, 2),
            axis_derivative(f, 2, 2),
            xy,
            xz,
            yz,
        ],
    }
}
