//! Piecewise-linear Galerkin discretization on a uniform mesh.
//!
//! With hat functions `w_j` and coefficients `c`, the semi-discrete system is
//!
//! ```text
//! M c'' + (lam M + D) c' + (A + K M + B) c = F(t)
//! ```
//!
//! where `M_ij = <w_i, w_j>`, `A = S + h0 e0 e0^T + h1 e1 e1^T` with
//! `S_ij = <w_i', w_j'>`, and `D`, `B` hold the two-point boundary couplings.
//! Row `j` of every matrix is the equation tested with `w_j`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::params::ProblemParams;

/// Gauss-Legendre nodes on [-1, 1], three points.
pub const GAUSS3_POINTS: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
pub const GAUSS3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Uniform mesh of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    h: f64,
}

impl Mesh {
    pub fn uniform(n_nodes: usize) -> Result<Self> {
        if n_nodes < 2 {
            return Err(Error::Mesh(format!("need at least 2 nodes, got {n_nodes}")));
        }
        let h = 1.0 / (n_nodes - 1) as f64;
        let mut nodes: Vec<f64> = (0..n_nodes).map(|i| i as f64 * h).collect();
        nodes[n_nodes - 1] = 1.0;
        Ok(Mesh { nodes, h })
    }

    /// Accepts explicit nodes; they must be uniform on `[0, 1]` within `1e-12`.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        let n = nodes.len();
        if n < 2 {
            return Err(Error::Mesh(format!("need at least 2 nodes, got {n}")));
        }
        if nodes[0] != 0.0 || nodes[n - 1] != 1.0 {
            return Err(Error::Mesh("nodes must start at 0 and end at 1".into()));
        }
        let h = 1.0 / (n - 1) as f64;
        for (i, w) in nodes.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Mesh(format!("nodes not increasing at index {i}")));
            }
            if ((w[1] - w[0]) - h).abs() > 1e-12 {
                return Err(Error::Mesh(format!("non-uniform spacing at index {i}")));
            }
        }
        Ok(Mesh { nodes, h })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Quadrature points and weights of element `e`, in fixed order.
    pub fn gauss_points(&self, e: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (a, half) = (self.nodes[e], 0.5 * self.h);
        GAUSS3_POINTS
            .iter()
            .zip(GAUSS3_WEIGHTS.iter())
            .map(move |(xi, w)| (a + half * (1.0 + xi), w * half))
    }
}

pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Right-hand sides: interior source `f(x,t)` and boundary data `g0(t)`, `g1(t)`.
#[derive(Clone)]
pub struct Forcing {
    pub f: SpaceTimeFn,
    pub g0: TimeFn,
    pub g1: TimeFn,
    zero: bool,
}

impl Forcing {
    pub fn new(f: SpaceTimeFn, g0: TimeFn, g1: TimeFn) -> Self {
        Forcing {
            f,
            g0,
            g1,
            zero: false,
        }
    }

    pub fn zero() -> Self {
        Forcing {
            f: Arc::new(|_, _| 0.0),
            g0: Arc::new(|_| 0.0),
            g1: Arc::new(|_| 0.0),
            zero: true,
        }
    }

    /// True only for [`Forcing::zero`]; closures are never inspected.
    pub fn is_zero(&self) -> bool {
        self.zero
    }
}

impl std::fmt::Debug for Forcing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Forcing").field("zero", &self.zero).finish()
    }
}

/// Assembled matrices of the semi-discrete system.
#[derive(Clone, Debug)]
pub struct GalerkinSystem {
    pub mesh: Mesh,
    pub params: ProblemParams,
    pub mass: DMatrix<f64>,
    /// `S_ij = <w_i', w_j'>`
    pub stiffness: DMatrix<f64>,
    /// Matrix of the bilinear form `a(w_j, w_i)`
    pub a: DMatrix<f64>,
    /// Boundary velocity coupling
    pub d: DMatrix<f64>,
    /// Boundary displacement cross coupling
    pub b: DMatrix<f64>,
    pub trace0: DVector<f64>,
    pub trace1: DVector<f64>,
}

/// Assembles the system for `p` on `mesh`. No hypothesis is checked here.
pub fn assemble(mesh: &Mesh, p: &ProblemParams) -> GalerkinSystem {
    let m = mesh.n_nodes();
    let h = mesh.spacing();
    let mut mass = DMatrix::zeros(m, m);
    let mut stiffness = DMatrix::zeros(m, m);
    let me = [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]];
    let se = [[1.0 / h, -1.0 / h], [-1.0 / h, 1.0 / h]];
    for e in 0..m - 1 {
        for (a, ga) in [e, e + 1].into_iter().enumerate() {
            for (b, gb) in [e, e + 1].into_iter().enumerate() {
                mass[(ga, gb)] += me[a][b];
                stiffness[(ga, gb)] += se[a][b];
            }
        }
    }

    let mut trace0 = DVector::zeros(m);
    let mut trace1 = DVector::zeros(m);
    trace0[0] = 1.0;
    trace1[m - 1] = 1.0;

    // outer(row, col): entry (j, i) = row_j * col_i
    let outer = |row: &DVector<f64>, col: &DVector<f64>| row * col.transpose();
    let e00 = outer(&trace0, &trace0);
    let e11 = outer(&trace1, &trace1);
    let e01 = outer(&trace0, &trace1); // u(1) in the equation at x = 0
    let e10 = outer(&trace1, &trace0); // u(0) in the equation at x = 1

    let a = &stiffness + &e00 * p.h0 + &e11 * p.h1;
    let d = &e00 * p.lam0 + &e01 * p.lt1 + &e11 * p.lam1 + &e10 * p.lt0;
    let b = &e01 * p.ht1 + &e10 * p.ht0;

    GalerkinSystem {
        mesh: mesh.clone(),
        params: *p,
        mass,
        stiffness,
        a,
        d,
        b,
        trace0,
        trace1,
    }
}

impl GalerkinSystem {
    pub fn dim(&self) -> usize {
        self.mass.nrows()
    }

    /// Damping matrix `lam M + D`.
    pub fn damping(&self) -> DMatrix<f64> {
        &self.mass * self.params.lam + &self.d
    }

    /// Displacement matrix `A + K M + B`.
    pub fn displacement(&self) -> DMatrix<f64> {
        &self.a + &self.mass * self.params.k + &self.b
    }

    pub(crate) fn check_dim(&self, c: &DVector<f64>) -> Result<()> {
        if c.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.dim(),
                found: c.len(),
            })
        }
    }

    pub fn value_at_0(&self, c: &DVector<f64>) -> f64 {
        c[0]
    }

    pub fn value_at_1(&self, c: &DVector<f64>) -> f64 {
        c[c.len() - 1]
    }

    /// Evaluates `sum_i c_i w_i(x)` for `x` in `[0, 1]`.
    pub fn evaluate(&self, c: &DVector<f64>, x: f64) -> f64 {
        let (e, s) = self.locate(x);
        c[e] * (1.0 - s) + c[e + 1] * s
    }

    /// Slope of the discrete function on the element containing `x`.
    pub fn slope(&self, c: &DVector<f64>, x: f64) -> f64 {
        let (e, _) = self.locate(x);
        (c[e + 1] - c[e]) / self.mesh.spacing()
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let h = self.mesh.spacing();
        let n_el = self.dim() - 1;
        let e = ((x / h).floor().max(0.0) as usize).min(n_el - 1);
        (e, (x - self.mesh.nodes()[e]) / h)
    }

    /// Load vector `F_j(t) = -g0(t) w_j(0) - g1(t) w_j(1) + <f(., t), w_j>`.
    pub fn load_vector(&self, forcing: &Forcing, t: f64) -> DVector<f64> {
        let m = self.dim();
        let mut out = DVector::zeros(m);
        if forcing.is_zero() {
            return out;
        }
        let h = self.mesh.spacing();
        for e in 0..m - 1 {
            let a = self.mesh.nodes()[e];
            for (x, w) in self.mesh.gauss_points(e) {
                let fx = (forcing.f)(x, t) * w;
                let s = (x - a) / h;
                out[e] += fx * (1.0 - s);
                out[e + 1] += fx * s;
            }
        }
        let (g0, g1) = ((forcing.g0)(t), (forcing.g1)(t));
        out -= &self.trace0 * g0;
        out -= &self.trace1 * g1;
        out
    }

    /// `||f(., t)||^2` by the element quadrature rule.
    pub fn source_norm_sq(&self, forcing: &Forcing, t: f64) -> f64 {
        if forcing.is_zero() {
            return 0.0;
        }
        (0..self.dim() - 1)
            .flat_map(|e| self.mesh.gauss_points(e))
            .map(|(x, w)| {
                let v = (forcing.f)(x, t);
                v * v * w
            })
            .sum()
    }

    /// `v(0)^2 + ||v_x||^2`
    pub fn norm_1_sq(&self, c: &DVector<f64>) -> Result<f64> {
        self.check_dim(c)?;
        let v0 = self.trace0.dot(c);
        Ok(v0 * v0 + quad(&self.stiffness, c))
    }

    /// `a(v, v)`
    pub fn norm_a_sq(&self, c: &DVector<f64>) -> Result<f64> {
        self.check_dim(c)?;
        Ok(quad(&self.a, c))
    }

    /// `||v||^2` in L2.
    pub fn l2_sq(&self, c: &DVector<f64>) -> Result<f64> {
        self.check_dim(c)?;
        Ok(quad(&self.mass, c))
    }

    /// Maximum of `|v|` on `[0, 1]`, attained at a node for hat functions.
    pub fn sup_norm(&self, c: &DVector<f64>) -> Result<f64> {
        self.check_dim(c)?;
        Ok(c.iter().fold(0.0, |acc, v| acc.max(v.abs())))
    }
}

pub(crate) fn quad(mat: &DMatrix<f64>, c: &DVector<f64>) -> f64 {
    c.dot(&(mat * c))
}
