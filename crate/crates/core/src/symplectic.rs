//! Real and complex dense matrices carrying symplectic structure.
//!
//! Quadratures are ordered `(x, p)` per port and the vacuum variance is
//! `<x^2> = 1`, which follows from `x = a + a†`, `p = -i a + i a†`. With this
//! normalization `[x, p] = 2i` and the symplectic form has per-mode blocks
//! `[[0, 1], [-1, 0]]`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Default absolute tolerance for matrix identities.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Imaginary residue allowed when mapping a ladder matrix to quadratures,
/// relative to the largest entry (floored at 1).
const LADDER_RESIDUE_TOL: f64 = 1e-12;

/// A bosonic port. The four physical ports of the transducer come first in
/// the global ordering; `Mode(i)` labels anonymous modes of generic matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Port {
    OpticalCoupling,
    OpticalIntrinsic,
    MicrowaveCoupling,
    MicrowaveIntrinsic,
    Mode(usize),
}

/// Port order of the full 8x8 scattering matrix.
pub const MODEL_PORTS: [Port; 4] = [
    Port::OpticalCoupling,
    Port::OpticalIntrinsic,
    Port::MicrowaveCoupling,
    Port::MicrowaveIntrinsic,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadLabel {
    pub port: Port,
    pub quadrature: Quadrature,
}

fn mode_ports(n: usize) -> Vec<Port> {
    (0..n).map(Port::Mode).collect()
}

fn expand_labels(ports: &[Port]) -> Vec<QuadLabel> {
    ports
        .iter()
        .flat_map(|&port| {
            [
                QuadLabel { port, quadrature: Quadrature::X },
                QuadLabel { port, quadrature: Quadrature::P },
            ]
        })
        .collect()
}

fn position(ports: &[Port], port: Port) -> Result<usize> {
    ports
        .iter()
        .position(|&p| p == port)
        .ok_or_else(|| Error::Dimension(format!("port {port:?} not present in labels {ports:?}")))
}

/// Largest absolute entry.
pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// The symplectic form `Omega` for `n_modes` modes in `(x, p)` per-mode order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    omega: RealMatrix,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Self {
        let dim = 2 * n_modes;
        let mut omega = RealMatrix::zeros(dim, dim);
        for k in 0..n_modes {
            omega[(2 * k, 2 * k + 1)] = 1.0;
            omega[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self { n_modes, omega }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.omega
    }
}

/// A real matrix acting on quadrature vectors, with port labels on both axes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMatrix {
    entries: RealMatrix,
    rows: Vec<Port>,
    cols: Vec<Port>,
}

impl QuadratureMatrix {
    pub fn new(entries: RealMatrix, rows: Vec<Port>, cols: Vec<Port>) -> Result<Self> {
        if entries.nrows() != 2 * rows.len() || entries.ncols() != 2 * cols.len() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix does not fit {} row ports and {} column ports",
                entries.nrows(),
                entries.ncols(),
                rows.len(),
                cols.len()
            )));
        }
        Ok(Self { entries, rows, cols })
    }

    /// Labels rows and columns with anonymous modes. Fails on odd dimensions.
    pub fn from_modes(entries: RealMatrix) -> Result<Self> {
        let (r, c) = entries.shape();
        if r % 2 != 0 || c % 2 != 0 {
            return Err(Error::Dimension(format!("quadrature matrix must have even dimensions, got {r}x{c}")));
        }
        Self::new(entries, mode_ports(r / 2), mode_ports(c / 2))
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_modes(RealMatrix::from_row_slice(rows, cols, data))
    }

    pub fn identity(n_modes: usize) -> Self {
        let ports = mode_ports(n_modes);
        Self {
            entries: RealMatrix::identity(2 * n_modes, 2 * n_modes),
            rows: ports.clone(),
            cols: ports,
        }
    }

    pub fn entries(&self) -> &RealMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> RealMatrix {
        self.entries
    }

    pub fn row_ports(&self) -> &[Port] {
        &self.rows
    }

    pub fn col_ports(&self) -> &[Port] {
        &self.cols
    }

    pub fn row_labels(&self) -> Vec<QuadLabel> {
        expand_labels(&self.rows)
    }

    pub fn col_labels(&self) -> Vec<QuadLabel> {
        expand_labels(&self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.entries.is_square()
    }

    pub fn n_row_modes(&self) -> usize {
        self.rows.len()
    }

    /// Coefficient of input quadrature `col` in output quadrature `row`.
    pub fn coefficient(&self, row: QuadLabel, col: QuadLabel) -> Result<f64> {
        let r = 2 * position(&self.rows, row.port)? + (row.quadrature == Quadrature::P) as usize;
        let c = 2 * position(&self.cols, col.port)? + (col.quadrature == Quadrature::P) as usize;
        Ok(self.entries[(r, c)])
    }

    /// Sub-matrix on the given row and column ports, in the order given.
    pub fn select(&self, rows: &[Port], cols: &[Port]) -> Result<Self> {
        let row_idx = rows.iter().map(|&p| position(&self.rows, p)).collect::<Result<Vec<_>>>()?;
        let col_idx = cols.iter().map(|&p| position(&self.cols, p)).collect::<Result<Vec<_>>>()?;
        let entries = RealMatrix::from_fn(2 * rows.len(), 2 * cols.len(), |i, j| {
            self.entries[(2 * row_idx[i / 2] + i % 2, 2 * col_idx[j / 2] + j % 2)]
        });
        Ok(Self { entries, rows: rows.to_vec(), cols: cols.to_vec() })
    }

    /// Matrix product `self * rhs`; inner dimensions must agree.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.entries.ncols() != rhs.entries.nrows() {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} with {}x{}",
                self.entries.nrows(),
                self.entries.ncols(),
                rhs.entries.nrows(),
                rhs.entries.ncols()
            )));
        }
        Ok(Self {
            entries: &self.entries * &rhs.entries,
            rows: self.rows.clone(),
            cols: rhs.cols.clone(),
        })
    }

    pub fn transpose(&self) -> Self {
        Self {
            entries: self.entries.transpose(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    pub fn determinant(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        Ok(self.entries.determinant())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(&self.entries - &other.entries))
    }
}

/// A complex matrix in the doubled ladder basis `(a, a†)` per port.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderMatrix {
    entries: ComplexMatrix,
    rows: Vec<Port>,
    cols: Vec<Port>,
}

impl LadderMatrix {
    pub fn new(entries: ComplexMatrix, rows: Vec<Port>, cols: Vec<Port>) -> Result<Self> {
        if entries.nrows() != 2 * rows.len() || entries.ncols() != 2 * cols.len() {
            return Err(Error::Dimension(format!(
                "{}x{} ladder matrix does not fit {} row ports and {} column ports",
                entries.nrows(),
                entries.ncols(),
                rows.len(),
                cols.len()
            )));
        }
        Ok(Self { entries, rows, cols })
    }

    pub fn from_modes(entries: ComplexMatrix) -> Result<Self> {
        let (r, c) = entries.shape();
        if r % 2 != 0 || c % 2 != 0 {
            return Err(Error::Dimension(format!("ladder matrix must have even dimensions, got {r}x{c}")));
        }
        Self::new(entries, mode_ports(r / 2), mode_ports(c / 2))
    }

    pub fn identity(n_modes: usize) -> Self {
        let ports = mode_ports(n_modes);
        Self {
            entries: ComplexMatrix::identity(2 * n_modes, 2 * n_modes),
            rows: ports.clone(),
            cols: ports,
        }
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn row_ports(&self) -> &[Port] {
        &self.rows
    }

    pub fn col_ports(&self) -> &[Port] {
        &self.cols
    }

    /// Largest violation of the doubled structure: within every 2x2 port
    /// block, the conjugate row/column pair must be the element-wise conjugate
    /// of the mode pair under the swap.
    pub fn doubled_structure_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for bi in 0..self.rows.len() {
            for bj in 0..self.cols.len() {
                let (i, j) = (2 * bi, 2 * bj);
                let e = &self.entries;
                worst = worst
                    .max((e[(i + 1, j + 1)] - e[(i, j)].conj()).norm())
                    .max((e[(i + 1, j)] - e[(i, j + 1)].conj()).norm());
            }
        }
        worst
    }
}

/// Per-port ladder-to-quadrature map `[[1, 1], [-i, i]]`.
fn port_transform(n_ports: usize) -> ComplexMatrix {
    let mut q = ComplexMatrix::zeros(2 * n_ports, 2 * n_ports);
    let i = Complex64::i();
    for k in 0..n_ports {
        q[(2 * k, 2 * k)] = Complex64::new(1.0, 0.0);
        q[(2 * k, 2 * k + 1)] = Complex64::new(1.0, 0.0);
        q[(2 * k + 1, 2 * k)] = -i;
        q[(2 * k + 1, 2 * k + 1)] = i;
    }
    q
}

/// Inverse of [`port_transform`]: `1/2 [[1, i], [1, -i]]` per port.
fn port_transform_inverse(n_ports: usize) -> ComplexMatrix {
    let mut q = ComplexMatrix::zeros(2 * n_ports, 2 * n_ports);
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, 0.5);
    for k in 0..n_ports {
        q[(2 * k, 2 * k)] = half;
        q[(2 * k, 2 * k + 1)] = half_i;
        q[(2 * k + 1, 2 * k)] = half;
        q[(2 * k + 1, 2 * k + 1)] = -half_i;
    }
    q
}

/// `S_x = Q S_a Q^-1`. The result must be real; an imaginary residue above
/// `1e-12` (relative to the largest entry) means the input broke the doubled
/// structure.
pub fn ladder_to_quadrature(s: &LadderMatrix) -> Result<QuadratureMatrix> {
    let q = port_transform(s.rows.len());
    let q_inv = port_transform_inverse(s.cols.len());
    let sx = q * &s.entries * q_inv;

    let scale = sx.iter().fold(1.0_f64, |acc, z| acc.max(z.re.abs()));
    let residue = sx.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    let threshold = LADDER_RESIDUE_TOL * scale;
    if residue > threshold {
        return Err(Error::Convention { residue, threshold });
    }
    QuadratureMatrix::new(sx.map(|z| z.re), s.rows.clone(), s.cols.clone())
}

/// `S_a = Q^-1 S_x Q`, the inverse of [`ladder_to_quadrature`].
pub fn quadrature_to_ladder(s: &QuadratureMatrix) -> LadderMatrix {
    let q_inv = port_transform_inverse(s.rows.len());
    let q = port_transform(s.cols.len());
    let sx = s.entries.map(|v| Complex64::new(v, 0.0));
    LadderMatrix {
        entries: q_inv * sx * q,
        rows: s.rows.clone(),
        cols: s.cols.clone(),
    }
}

fn require_square_even(m: &RealMatrix) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::Dimension(format!("expected a square matrix, got {r}x{c}")));
    }
    if r % 2 != 0 {
        return Err(Error::Dimension(format!("expected an even dimension, got {r}")));
    }
    Ok(r / 2)
}

/// `max |M Omega M^T - Omega|`.
pub fn symplectic_residual(m: &RealMatrix) -> Result<f64> {
    let n = require_square_even(m)?;
    let omega = SymplecticForm::new(n);
    Ok(max_abs(&(m * omega.matrix() * m.transpose() - omega.matrix())))
}

pub fn is_symplectic(m: &QuadratureMatrix, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(&m.entries)? <= tol)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(h: &ComplexMatrix) -> f64 {
    let eig = SymmetricEigen::new(h.clone());
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn symmetry_residual(m: &RealMatrix) -> f64 {
    max_abs(&(m - m.transpose()))
}

/// Smallest eigenvalue of `N + i Omega - i T Omega T^T`.
pub fn cp_min_eigenvalue(t: &QuadratureMatrix, n: &QuadratureMatrix) -> Result<f64> {
    let dim = require_square_even(&t.entries)?;
    if n.entries.shape() != t.entries.shape() {
        return Err(Error::Dimension("T and N must have the same shape".into()));
    }
    let scale = max_abs(&n.entries).max(1.0);
    if symmetry_residual(&n.entries) > 1e-12 * scale {
        return Err(Error::Precondition("noise matrix N must be symmetric".into()));
    }
    let omega = SymplecticForm::new(dim);
    let gap = omega.matrix() - &t.entries * omega.matrix() * t.entries.transpose();
    let h = ComplexMatrix::from_fn(2 * dim, 2 * dim, |i, j| Complex64::new(n.entries[(i, j)], gap[(i, j)]));
    Ok(min_hermitian_eigenvalue(&h))
}

/// Complete positivity of the Gaussian channel `V -> T V T^T + N`.
pub fn cp_check(t: &QuadratureMatrix, n: &QuadratureMatrix, tol: f64) -> Result<bool> {
    Ok(cp_min_eigenvalue(t, n)? >= -tol)
}

/// Quantum covariance matrix, vacuum normalized to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    v: RealMatrix,
}

/// Tolerance of the `V + i Omega >= 0` physicality test.
const PHYSICALITY_TOL: f64 = 1e-10;

impl CovarianceMatrix {
    /// Validates symmetry and `V + i Omega >= 0`.
    pub fn new(v: RealMatrix) -> Result<Self> {
        let n = require_square_even(&v)?;
        let scale = max_abs(&v).max(1.0);
        if symmetry_residual(&v) > 1e-12 * scale {
            return Err(Error::Precondition("covariance matrix must be symmetric".into()));
        }
        let omega = SymplecticForm::new(n);
        let h = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| Complex64::new(v[(i, j)], omega.matrix()[(i, j)]));
        if min_hermitian_eigenvalue(&h) < -PHYSICALITY_TOL * scale {
            return Err(Error::Unphysical { port: 0 });
        }
        Ok(Self { v })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self { v: RealMatrix::identity(2 * n_modes, 2 * n_modes) }
    }

    /// Thermal state with occupancy `n` on every mode: `(2n + 1) I`.
    pub fn thermal(n_modes: usize, occupancy: f64) -> Result<Self> {
        if occupancy < 0.0 || !occupancy.is_finite() {
            return Err(Error::Unphysical { port: 0 });
        }
        Ok(Self { v: RealMatrix::identity(2 * n_modes, 2 * n_modes) * (2.0 * occupancy + 1.0) })
    }

    /// Single mode `b_sq = cosh(lambda) b + e^{-i phi} sinh(lambda) b†` applied
    /// to a thermal mode with occupancy `n`.
    ///
    /// Expanding `<x^2>`, `<p^2>` and `<xp + px>/2` gives
    /// `(2n+1) [[c + s cos phi, -s sin phi], [-s sin phi, c - s cos phi]]`
    /// with `c = cosh 2 lambda`, `s = sinh 2 lambda`.
    pub fn squeezed_thermal(lambda: f64, phi: f64, occupancy: f64) -> Result<Self> {
        if occupancy < 0.0 || !occupancy.is_finite() || !lambda.is_finite() {
            return Err(Error::Unphysical { port: 0 });
        }
        let w = 2.0 * occupancy + 1.0;
        let (c, s) = ((2.0 * lambda).cosh(), (2.0 * lambda).sinh());
        let v = RealMatrix::from_row_slice(
            2,
            2,
            &[w * (c + s * phi.cos()), -w * s * phi.sin(), -w * s * phi.sin(), w * (c - s * phi.cos())],
        );
        Ok(Self { v })
    }

    /// Block-diagonal direct sum; reports the offending block on failure.
    pub fn direct_sum(blocks: &[CovarianceMatrix]) -> Result<Self> {
        let dim: usize = blocks.iter().map(|b| b.v.nrows()).sum();
        let mut v = RealMatrix::zeros(dim, dim);
        let mut offset = 0;
        for (port, block) in blocks.iter().enumerate() {
            let k = block.v.nrows();
            if CovarianceMatrix::new(block.v.clone()).is_err() {
                return Err(Error::Unphysical { port });
            }
            v.view_mut((offset, offset), (k, k)).copy_from(&block.v);
            offset += k;
        }
        Ok(Self { v })
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.v
    }

    pub fn n_modes(&self) -> usize {
        self.v.nrows() / 2
    }
}

/// `S = O D O'` with `O`, `O'` symplectic orthogonal and `D` diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochMessiahFactors {
    pub o: QuadratureMatrix,
    pub d: QuadratureMatrix,
    pub o_prime: QuadratureMatrix,
}

impl BlochMessiahFactors {
    /// Per-mode squeezing factors `d >= 1`, in the order they appear in `D`.
    pub fn squeezing(&self) -> Vec<f64> {
        (0..self.d.n_row_modes()).map(|k| self.d.entries[(2 * k, 2 * k)]).collect()
    }

    pub fn reconstruct(&self) -> RealMatrix {
        &self.o.entries * &self.d.entries * &self.o_prime.entries
    }
}

/// Relative width of a cluster of (numerically) degenerate singular values.
const CLUSTER_TOL: f64 = 1e-8;

/// Bloch-Messiah factorization via the polar decomposition.
///
/// `S^T S = V Sigma^2 V^T` gives `S = O_p P` with `P = V Sigma V^T` and
/// `O_p = S P^-1`. `P` is then diagonalized by a symplectic orthogonal
/// congruence `P = W D W^T`: for every eigenvector `v` of `P` with eigenvalue
/// `d`, `Omega^T v` is an eigenvector with eigenvalue `1/d`, so each mode gets
/// the column pair `(v, Omega^T v)`. Within a degenerate eigenspace, basis
/// vectors are chosen from projections of the standard basis in index order.
///
/// Gauge: modes are ordered by decreasing `d`; each column pair of `O` is
/// signed so the first nonzero entry of its `x` column is positive.
///
/// `tol` bounds the symplectic residual and the reconstruction error, both
/// relative to the largest entry of `s` once it exceeds one.
pub fn bloch_messiah(s: &QuadratureMatrix, tol: f64) -> Result<BlochMessiahFactors> {
    let n = require_square_even(&s.entries)?;
    let residual = symplectic_residual(&s.entries)?;
    let scale = max_abs(&s.entries).max(1.0);
    if residual > tol * scale * scale {
        return Err(Error::Precondition(format!("matrix is not symplectic (residual {residual:e} > {tol:e})")));
    }
    let dim = 2 * n;
    let omega = SymplecticForm::new(n);
    let omega_t = omega.matrix().transpose();

    // P = sqrt(S^T S) from a symmetric eigensolve; nalgebra's SVD can return
    // inaccurate factors when singular values are clustered
    let eig = (s.entries.transpose() * &s.entries).symmetric_eigen();
    let sigma = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    if sigma.iter().any(|&x| x <= 0.0) {
        return Err(Error::Decomposition("matrix is singular".into()));
    }
    let v = eig.eigenvectors;
    let p = &v * RealMatrix::from_diagonal(&sigma) * v.transpose();
    let o_polar = &s.entries * &v * RealMatrix::from_diagonal(&sigma.map(|x| 1.0 / x)) * v.transpose();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));

    // Singular values pair up as (d, 1/d). Pairs whose larger member is within
    // tolerance of one form a single even-sized unit cluster; the remaining
    // d > 1 values are grouped into degenerate clusters.
    let m = order[..n].iter().take_while(|&&i| sigma[i] > 1.0 + CLUSTER_TOL * sigma[i]).count();
    let mut clusters: Vec<(Vec<usize>, usize)> = Vec::new();
    for &idx in &order[..m] {
        let val = sigma[idx];
        match clusters.last_mut() {
            Some((c, needed)) if (sigma[c[0]] - val).abs() <= CLUSTER_TOL * val => {
                c.push(idx);
                *needed += 1;
            }
            _ => clusters.push((vec![idx], 1)),
        }
    }
    if m < n {
        clusters.push((order[m..dim - m].to_vec(), n - m));
    }

    let mut chosen: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(n);
    for (cluster, needed) in &clusters {
        let mut projector = RealMatrix::zeros(dim, dim);
        for &idx in cluster {
            let col = v.column(idx);
            projector += col * col.transpose();
        }
        for _ in 0..*needed {
            let residuals: Vec<nalgebra::DVector<f64>> = (0..dim)
                .map(|j| {
                    let mut r = projector.column(j).into_owned();
                    for w in &chosen {
                        let partner = &omega_t * w;
                        r -= w * w.dot(&r);
                        r -= &partner * partner.dot(&r);
                    }
                    r
                })
                .collect();
            let best = residuals.iter().map(|r| r.norm()).fold(0.0_f64, f64::max);
            if best < 1e-8 {
                return Err(Error::Decomposition("could not build a symplectic eigenbasis".into()));
            }
            let pick = residuals
                .into_iter()
                .find(|r| r.norm() >= 0.5 * best)
                .expect("a residual attains the maximum");
            chosen.push(pick.normalize());
        }
    }
    if chosen.len() != n {
        return Err(Error::Decomposition(format!("found {} of {} symplectic eigenvectors", chosen.len(), n)));
    }

    let mut w = RealMatrix::zeros(dim, dim);
    let mut diag = vec![0.0; dim];
    for (k, vec) in chosen.iter().enumerate() {
        let partner = &omega_t * vec;
        w.set_column(2 * k, vec);
        w.set_column(2 * k + 1, &partner);
        let d = vec.dot(&(&p * vec));
        diag[2 * k] = d;
        diag[2 * k + 1] = 1.0 / d;
    }

    let mut o = o_polar * &w;
    let mut o_prime = w.transpose();
    let gauge_floor = 1e-12;
    for k in 0..n {
        let lead = o.column(2 * k).iter().copied().find(|x| x.abs() > gauge_floor).unwrap_or(1.0);
        if lead < 0.0 {
            for c in [2 * k, 2 * k + 1] {
                o.column_mut(c).neg_mut();
                o_prime.row_mut(c).neg_mut();
            }
        }
    }

    let factors = BlochMessiahFactors {
        o: QuadratureMatrix::new(o, s.rows.clone(), mode_ports(n))?,
        d: QuadratureMatrix::new(RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)), mode_ports(n), mode_ports(n))?,
        o_prime: QuadratureMatrix::new(o_prime, mode_ports(n), s.cols.clone())?,
    };
    let err = max_abs(&(factors.reconstruct() - &s.entries));
    if err > 10.0 * tol * scale {
        return Err(Error::Decomposition(format!("reconstruction error {err:e} exceeds {:e}", 10.0 * tol * scale)));
    }
    Ok(factors)
}
