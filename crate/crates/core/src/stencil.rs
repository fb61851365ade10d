//! Finite-difference weights and line-wise stencil application on x-fastest arrays.

/// Fornberg's recursion: `w[k][j]` is the weight of node `xs[j]` for the k-th derivative at `x0`.
pub fn fornberg(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// A stencil over integer offsets: `out[i] = Σ w_o x[i + o]`, with `x` zero outside the line.
#[derive(Clone, Debug)]
pub struct LineStencil {
    pub offsets: Vec<isize>,
    pub weights: Vec<f64>,
}

impl LineStencil {
    fn from_positions(offsets: Vec<isize>, positions: &[f64], deriv: usize) -> Self {
        let w = fornberg(0.0, positions, deriv);
        LineStencil {
            offsets,
            weights: w[deriv].clone(),
        }
    }

    /// Node-to-node application, `out.len() == x.len()`.
    pub fn apply(&self, x: &[f64], out: &mut [f64], scale: f64) {
        let n = x.len() as isize;
        for (i, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for (&off, &w) in self.offsets.iter().zip(&self.weights) {
                let j = i as isize + off;
                if j >= 0 && j < n {
                    s += w * x[j as usize];
                }
            }
            *o = s * scale;
        }
    }

    /// Same as `apply` but the output line may have a different length (faces: `n + 1`).
    pub fn apply_shifted(&self, x: &[f64], out: &mut [f64], scale: f64) {
        let n = x.len() as isize;
        for (f, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for (&off, &w) in self.offsets.iter().zip(&self.weights) {
                let j = f as isize + off;
                if j >= 0 && j < n {
                    s += w * x[j as usize];
                }
            }
            *o = s * scale;
        }
    }
}

/// Centered stencils of a given even order used by the collision operator.
///
/// Faces along an axis are numbered `0..=n`; face `f` sits between cells `f-1` and `f`.
#[derive(Clone, Debug)]
pub struct OperatorStencils {
    pub order: usize,
    pub d1: LineStencil,
    pub d2: LineStencil,
    pub face_interp: LineStencil,
    pub face_d1: LineStencil,
    /// Face-to-face smoothing whose differences give the high-order divergence.
    pub flux: LineStencil,
}

impl OperatorStencils {
    pub fn new(order: usize) -> Self {
        assert!(order >= 2 && order % 2 == 0, "stencil order must be even");
        let h = (order / 2) as isize;
        let centered: Vec<isize> = (-h..=h).collect();
        let cpos: Vec<f64> = centered.iter().map(|&o| o as f64).collect();
        let d1 = LineStencil::from_positions(centered.clone(), &cpos, 1);
        let d2 = LineStencil::from_positions(centered, &cpos, 2);

        let face_cells: Vec<isize> = (-h..h).collect();
        let fpos: Vec<f64> = face_cells.iter().map(|&o| o as f64 + 0.5).collect();
        let face_interp = LineStencil::from_positions(face_cells.clone(), &fpos, 0);
        let face_d1 = LineStencil::from_positions(face_cells, &fpos, 1);

        // Node derivative from faces at ±1/2, ±3/2, ...; write it as G(f+1) - G(f).
        let hu = h as usize;
        let mut wpos = vec![0.0; hu];
        let pos: Vec<f64> = (-h..h).map(|o| o as f64 + 0.5).collect();
        let w = fornberg(0.0, &pos, 1);
        for (p, &wt) in pos.iter().zip(&w[1]) {
            if *p > 0.0 {
                wpos[(p - 0.5) as usize] = wt;
            }
        }
        let mut g = vec![0.0; hu];
        let mut acc = 0.0;
        for m in (0..hu).rev() {
            acc += wpos[m];
            g[m] = acc;
        }
        let offsets: Vec<isize> = (-(h - 1)..h).collect();
        let weights: Vec<f64> = offsets.iter().map(|&m| g[m.unsigned_abs()]).collect();
        OperatorStencils {
            order,
            d1,
            d2,
            face_interp,
            face_d1,
            flux: LineStencil { offsets, weights },
        }
    }
}

/// Strides of an x-fastest array with the given dimensions.
#[inline]
pub fn strides(dims: [usize; 3]) -> [usize; 3] {
    [1, dims[0], dims[0] * dims[1]]
}

/// Apply `f` to every line along `axis`; the output has length `out_len` along that axis.
pub fn map_lines<F>(src: &[f64], dims: [usize; 3], axis: usize, out_len: usize, f: F) -> Vec<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut odims = dims;
    odims[axis] = out_len;
    let is = strides(dims);
    let os = strides(odims);
    let (p, q) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut out = vec![0.0; odims[0] * odims[1] * odims[2]];
    let mut lin = vec![0.0; dims[axis]];
    let mut lout = vec![0.0; out_len];
    for b in 0..dims[q] {
        for a in 0..dims[p] {
            let ib = a * is[p] + b * is[q];
            let ob = a * os[p] + b * os[q];
            for (t, x) in lin.iter_mut().enumerate() {
                *x = src[ib + t * is[axis]];
            }
            f(&lin, &mut lout);
            for (t, x) in lout.iter().enumerate() {
                out[ob + t * os[axis]] = *x;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_fourth_order_weights() {
        let w = fornberg(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for j in 0..5 {
            assert!((w[1][j] - d1[j]).abs() < 1e-14);
            assert!((w[2][j] - d2[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn flux_form_reproduces_face_derivative() {
        for order in [2, 4, 6, 10] {
            let s = OperatorStencils::new(order);
            assert!((s.flux.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
            // G(f+1) - G(f) on a linear face profile gives the slope.
            let faces: Vec<f64> = (0..40).map(|f| 0.3 * f as f64 - 1.0).collect();
            let mut g = vec![0.0; 40];
            s.flux.apply(&faces, &mut g, 1.0);
            assert!((g[21] - g[20] - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn stencils_exact_on_polynomials() {
        let s = OperatorStencils::new(10);
        let x: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let p = |t: f64| 1.0 + 0.5 * t - 0.02 * t * t + 1e-4 * t.powi(3);
        let dp = |t: f64| 0.5 - 0.04 * t + 3e-4 * t * t;
        let vals: Vec<f64> = x.iter().map(|&t| p(t)).collect();
        let mut out = vec![0.0; 30];
        s.d1.apply(&vals, &mut out, 1.0);
        assert!((out[15] - dp(15.0)).abs() < 1e-11);
        let mut fo = vec![0.0; 31];
        s.face_interp.apply_shifted(&vals, &mut fo, 1.0);
        assert!((fo[15] - p(14.5)).abs() < 1e-11);
        s.face_d1.apply_shifted(&vals, &mut fo, 1.0);
        assert!((fo[15] - dp(14.5)).abs() < 1e-11);
    }
}
