//! Linear algebra of a single fiber `K^n ⊕ K^n`.
//!
//! Fiber coordinates are ordered tangent block first, cotangent block second.
//! Conventions: `ω♯(u) = ω(u,·)`, `π♯(ξ) = π(ξ,·)`, and the pairing is
//! `⟨u+ξ, v+η⟩ = ξ(v) + η(u)` without a factor one half.

use std::ops::Deref;

use dirackit_exact::{Field, Matrix};

use crate::error::{GeomError, Result};

/// Element `u + ξ` of a fiber.
#[derive(Clone, PartialEq, Debug)]
pub struct FiberElement<F> {
    pub vec: Vec<F>,
    pub covec: Vec<F>,
}

impl<F: Field> FiberElement<F> {
    pub fn new(vec: Vec<F>, covec: Vec<F>) -> Result<Self> {
        if vec.len() != covec.len() {
            return Err(GeomError::DimensionMismatch { expected: vec.len(), got: covec.len() });
        }
        Ok(FiberElement { vec, covec })
    }

    pub fn zero(n: usize) -> Self {
        FiberElement { vec: vec![F::zero(); n], covec: vec![F::zero(); n] }
    }

    pub fn from_coords(n: usize, coords: &[F]) -> Self {
        assert_eq!(coords.len(), 2 * n, "fiber coordinates must have length 2n");
        FiberElement { vec: coords[..n].to_vec(), covec: coords[n..].to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn coords(&self) -> Vec<F> {
        self.vec.iter().chain(&self.covec).cloned().collect()
    }

    pub fn pr_t(&self) -> Self {
        FiberElement { vec: self.vec.clone(), covec: vec![F::zero(); self.dim()] }
    }

    pub fn pr_tstar(&self) -> Self {
        FiberElement { vec: vec![F::zero(); self.dim()], covec: self.covec.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.vec.iter().chain(&self.covec).all(|x| x.is_zero())
    }
}

fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}

/// `⟨u+ξ, v+η⟩ = ξ(v) + η(u)`.
pub fn pairing<F: Field>(a: &FiberElement<F>, b: &FiberElement<F>) -> Result<F> {
    if a.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(dot(&a.covec, &b.vec) + dot(&b.covec, &a.vec))
}

fn coords_pairing<F: Field>(n: usize, a: &[F], b: &[F]) -> F {
    dot(&a[n..], &b[..n]) + dot(&b[n..], &a[..n])
}

// ---------------------------------------------------------------------------

/// Linear subspace of `K^m`, stored as the nonzero rows of its reduced row
/// echelon form. Equal subspaces have identical representations.
#[derive(Clone, PartialEq, Debug)]
pub struct Span<F> {
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> Span<F> {
    pub fn new(ambient: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        for r in &rows {
            if r.len() != ambient {
                return Err(GeomError::DimensionMismatch { expected: ambient, got: r.len() });
            }
        }
        let m = Matrix::from_rows(ambient, rows);
        Ok(Span { ambient, basis: m.row_space_basis() })
    }

    pub fn from_matrix(m: &Matrix<F>) -> Self {
        Span { ambient: m.ncols(), basis: m.row_space_basis() }
    }

    pub fn zero(ambient: usize) -> Self {
        Span { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Span { ambient, basis: Matrix::identity(ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        self.basis.to_rows()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        v.len() == self.ambient && self.basis.vstack(&Matrix::from_rows(self.ambient, vec![v.to_vec()])).rank() == self.dim()
    }

    pub fn contains_span(&self, other: &Span<F>) -> bool {
        other.ambient == self.ambient && self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Span<F>) -> Span<F> {
        Span::from_matrix(&self.basis.vstack(&other.basis))
    }

    /// Linear functionals vanishing on the span, as a span of `K^m`.
    pub fn annihilator(&self) -> Span<F> {
        let rows = if self.dim() == 0 { Matrix::<F>::identity(self.ambient).to_rows() } else { self.basis.kernel() };
        Span::new(self.ambient, rows).expect("kernel vectors have ambient length")
    }

    pub fn intersection(&self, other: &Span<F>) -> Span<F> {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Image of the rows under a column selection `start..end`.
    pub fn project(&self, start: usize, end: usize) -> Span<F> {
        Span::from_matrix(&self.basis.columns(start, end))
    }
}

// ---------------------------------------------------------------------------

/// Subspace of the fiber `K^n ⊕ K^n`.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<F> {
    n: usize,
    span: Span<F>,
}

impl<F: Field> Subspace<F> {
    pub fn new(n: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        Ok(Subspace { n, span: Span::new(2 * n, rows)? })
    }

    pub fn from_span(n: usize, span: Span<F>) -> Result<Self> {
        if span.ambient() != 2 * n {
            return Err(GeomError::DimensionMismatch { expected: 2 * n, got: span.ambient() });
        }
        Ok(Subspace { n, span })
    }

    pub fn from_elements(n: usize, elems: &[FiberElement<F>]) -> Result<Self> {
        let mut rows = Vec::with_capacity(elems.len());
        for e in elems {
            if e.dim() != n {
                return Err(GeomError::DimensionMismatch { expected: n, got: e.dim() });
            }
            rows.push(e.coords());
        }
        Self::new(n, rows)
    }

    pub fn fiber_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn span(&self) -> &Span<F> {
        &self.span
    }

    pub fn basis(&self) -> &Matrix<F> {
        self.span.basis()
    }

    pub fn elements(&self) -> Vec<FiberElement<F>> {
        self.span.basis().rows().map(|r| FiberElement::from_coords(self.n, r)).collect()
    }

    pub fn contains(&self, e: &FiberElement<F>) -> bool {
        e.dim() == self.n && self.span.contains(&e.coords())
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        self.span.contains_span(&other.span)
    }

    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        self.check_same(other)?;
        Ok(Subspace { n: self.n, span: self.span.sum(&other.span) })
    }

    pub fn intersection(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        self.check_same(other)?;
        Ok(Subspace { n: self.n, span: self.span.intersection(&other.span) })
    }

    fn check_same(&self, other: &Subspace<F>) -> Result<()> {
        if self.n != other.n {
            return Err(GeomError::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }

    /// Orthogonal complement under the pairing.
    pub fn orthogonal(&self) -> Subspace<F> {
        let n = self.n;
        // ⟨w, x⟩ = w_T*·x_T + w_T·x_T*: swap the blocks of each row and take the kernel
        let swapped: Vec<Vec<F>> = self.span.basis().rows().map(|r| r[n..].iter().chain(&r[..n]).cloned().collect()).collect();
        let span = Span::new(2 * n, swapped).unwrap().annihilator();
        Subspace { n, span }
    }

    pub fn is_isotropic(&self) -> bool {
        let rows = self.span.rows();
        rows.iter().enumerate().all(|(i, a)| rows[i..].iter().all(|b| coords_pairing(self.n, a, b).is_zero()))
    }

    pub fn is_lagrangian(&self) -> bool {
        self.dim() == self.n && self.is_isotropic()
    }

    /// `pr_T` image as a subspace of `K^n`.
    pub fn pr_t(&self) -> Span<F> {
        self.span.project(0, self.n)
    }

    /// `pr_T*` image as a subspace of `K^n` (covector coordinates).
    pub fn pr_tstar(&self) -> Span<F> {
        self.span.project(self.n, 2 * self.n)
    }

    /// `L ∩ TM` as a subspace of `K^n`.
    pub fn tangent_part(&self) -> Span<F> {
        self.span.intersection(&tangent_span(self.n)).project(0, self.n)
    }

    /// `L ∩ T*M` as a subspace of `K^n`.
    pub fn cotangent_part(&self) -> Span<F> {
        self.span.intersection(&cotangent_span(self.n)).project(self.n, 2 * self.n)
    }
}

fn tangent_span<F: Field>(n: usize) -> Span<F> {
    let rows = (0..n).map(|i| (0..2 * n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    Span::new(2 * n, rows).unwrap()
}

fn cotangent_span<F: Field>(n: usize) -> Span<F> {
    let rows = (0..n).map(|i| (0..2 * n).map(|j| if j == n + i { F::one() } else { F::zero() }).collect()).collect();
    Span::new(2 * n, rows).unwrap()
}

// ---------------------------------------------------------------------------

/// A subspace known to be Lagrangian.
#[derive(Clone, PartialEq, Debug)]
pub struct LagSubspace<F>(Subspace<F>);

impl<F> Deref for LagSubspace<F> {
    type Target = Subspace<F>;
    fn deref(&self) -> &Subspace<F> {
        &self.0
    }
}

impl<F: Field> TryFrom<Subspace<F>> for LagSubspace<F> {
    type Error = GeomError;
    fn try_from(s: Subspace<F>) -> Result<Self> {
        LagSubspace::new(s)
    }
}

pub(crate) fn check_skew<F: Field>(m: &Matrix<F>, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(GeomError::ShapeMismatch(format!("expected a {n}x{n} matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    for i in 0..n {
        for j in i..n {
            if !(m[(i, j)].clone() + m[(j, i)].clone()).is_zero() {
                return Err(GeomError::NotAntisymmetric);
            }
        }
    }
    Ok(())
}

impl<F: Field> LagSubspace<F> {
    pub fn new(s: Subspace<F>) -> Result<Self> {
        if s.is_lagrangian() {
            Ok(LagSubspace(s))
        } else {
            Err(GeomError::NotLagrangian { dim: s.dim(), n: s.fiber_dim() })
        }
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        Self::new(Subspace::new(n, rows)?)
    }

    pub fn subspace(&self) -> &Subspace<F> {
        &self.0
    }

    pub fn into_subspace(self) -> Subspace<F> {
        self.0
    }

    pub fn tangent(n: usize) -> Self {
        LagSubspace(Subspace { n, span: tangent_span(n) })
    }

    pub fn cotangent(n: usize) -> Self {
        LagSubspace(Subspace { n, span: cotangent_span(n) })
    }

    /// `Gr(ω) = {u + ω♯(u)}`, rows `∂i + ω♯(∂i)`.
    pub fn graph_two_form(omega: &Matrix<F>) -> Result<Self> {
        let n = omega.nrows();
        check_skew(omega, n)?;
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).chain(omega.row(i).iter().cloned()).collect())
            .collect();
        Ok(LagSubspace(Subspace::new(n, rows)?))
    }

    /// `Gr(π) = {π♯(ξ) + ξ}`, rows `π♯(dx_i) + dx_i`.
    pub fn graph_bivector(pi: &Matrix<F>) -> Result<Self> {
        let n = pi.nrows();
        check_skew(pi, n)?;
        let rows =
            (0..n).map(|i| pi.row(i).iter().cloned().chain((0..n).map(|j| if i == j { F::one() } else { F::zero() })).collect()).collect();
        Ok(LagSubspace(Subspace::new(n, rows)?))
    }

    /// `Gr(E) = E ⊕ E°`.
    pub fn graph_distribution(e: &Span<F>) -> Self {
        let n = e.ambient();
        let mut rows: Vec<Vec<F>> = e.rows().into_iter().map(|r| r.into_iter().chain(vec![F::zero(); n]).collect()).collect();
        rows.extend(e.annihilator().rows().into_iter().map(|r| vec![F::zero(); n].into_iter().chain(r).collect()));
        LagSubspace(Subspace::new(n, rows).unwrap())
    }

    pub fn stats(&self) -> FiberStats {
        let pr_t_rank = self.pr_t().dim();
        FiberStats {
            pr_t_rank,
            pr_tstar_rank: self.pr_tstar().dim(),
            parity: if pr_t_rank.is_multiple_of(2) { Parity::Even } else { Parity::Odd },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FiberStats {
    pub pr_t_rank: usize,
    pub pr_tstar_rank: usize,
    pub parity: Parity,
}

// ---------------------------------------------------------------------------
// products

/// Which block the product matches on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Product {
    /// `L ⋆ R = {a + pr_T*(b) : pr_T(a − b) = 0}`
    Star,
    /// `L ⊛ R = {a + pr_T(b) : pr_T*(a − b) = 0}`
    Costar,
}

/// Product of arbitrary subspaces together with a flag recording whether
/// both inputs were Lagrangian.
#[derive(Clone, PartialEq, Debug)]
pub struct ProductOutcome<F> {
    pub result: Subspace<F>,
    pub lagrangian_inputs: bool,
}

fn block<F: Field>(row: &[F], n: usize, tangent: bool) -> &[F] {
    if tangent {
        &row[..n]
    } else {
        &row[n..]
    }
}

/// Applies `j(α, β) = Σ α_i a_i + Σ β_j p(b_j)` to every kernel vector of
/// `δ(α, β) = Σ α_i m(a_i) − Σ β_j m(b_j)`, where `m` is the matched block and
/// `p` keeps the other one.
pub(crate) fn product_system<F: Field>(n: usize, l: &Matrix<F>, r: &Matrix<F>, matched_tangent: bool) -> Matrix<F> {
    let kl = l.nrows();
    Matrix::from_fn(n, kl + r.nrows(), |i, j| {
        if j < kl {
            block(l.row(j), n, matched_tangent)[i].clone()
        } else {
            -block(r.row(j - kl), n, matched_tangent)[i].clone()
        }
    })
}

pub(crate) fn product_rows<F: Field>(n: usize, l: &Matrix<F>, r: &Matrix<F>, matched_tangent: bool) -> Vec<Vec<F>> {
    let kl = l.nrows();
    let delta = product_system(n, l, r, matched_tangent);
    let free_off = if matched_tangent { n } else { 0 };
    delta
        .kernel()
        .into_iter()
        .map(|coef| {
            let mut out = vec![F::zero(); 2 * n];
            for (i, c) in coef[..kl].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(l.row(i)) {
                    *o = o.clone() + c.clone() * x.clone();
                }
            }
            for (j, c) in coef[kl..].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let span = free_off..free_off + n;
                for (o, x) in out[span.clone()].iter_mut().zip(&r.row(j)[span]) {
                    *o = o.clone() + c.clone() * x.clone();
                }
            }
            out
        })
        .collect()
}

pub fn product_flagged<F: Field>(kind: Product, l: &Subspace<F>, r: &Subspace<F>) -> Result<ProductOutcome<F>> {
    l.check_same(r)?;
    let n = l.fiber_dim();
    let rows = product_rows(n, l.basis(), r.basis(), kind == Product::Star);
    Ok(ProductOutcome { result: Subspace::new(n, rows)?, lagrangian_inputs: l.is_lagrangian() && r.is_lagrangian() })
}

pub fn product<F: Field>(kind: Product, l: &LagSubspace<F>, r: &LagSubspace<F>) -> Result<LagSubspace<F>> {
    let out = product_flagged(kind, l, r)?;
    debug_assert!(out.result.is_lagrangian());
    Ok(LagSubspace(out.result))
}

pub fn star<F: Field>(l: &LagSubspace<F>, r: &LagSubspace<F>) -> Result<LagSubspace<F>> {
    product(Product::Star, l, r)
}

pub fn costar<F: Field>(l: &LagSubspace<F>, r: &LagSubspace<F>) -> Result<LagSubspace<F>> {
    product(Product::Costar, l, r)
}

// ---------------------------------------------------------------------------
// gauge actions

#[derive(Clone, PartialEq, Debug)]
pub enum Gauge<F> {
    /// `ℛ_ω(a) = a + ω♯(pr_T a)`
    TwoForm(Matrix<F>),
    /// `ℛ_π(a) = a + π♯(pr_T* a)`
    Bivector(Matrix<F>),
    /// `ℛ_t(a) = t·pr_T(a) + pr_T*(a)`
    Rescale(F),
}

impl<F: Field> Gauge<F> {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Gauge::TwoForm(m) | Gauge::Bivector(m) => check_skew(m, n),
            Gauge::Rescale(t) if t.is_zero() => Err(GeomError::ZeroRescale),
            Gauge::Rescale(_) => Ok(()),
        }
    }

    /// Image of a single fiber element; the gauge must already be validated.
    pub fn apply(&self, e: &FiberElement<F>) -> FiberElement<F> {
        let n = e.dim();
        match self {
            Gauge::TwoForm(w) => {
                // ω♯(u)_j = Σ_i u_i ω_ij
                let covec = (0..n).map(|j| e.covec[j].clone() + dot(&e.vec, &w.column(j))).collect();
                FiberElement { vec: e.vec.clone(), covec }
            }
            Gauge::Bivector(p) => {
                let vec = (0..n).map(|j| e.vec[j].clone() + dot(&e.covec, &p.column(j))).collect();
                FiberElement { vec, covec: e.covec.clone() }
            }
            Gauge::Rescale(t) => FiberElement { vec: e.vec.iter().map(|x| x.clone() * t.clone()).collect(), covec: e.covec.clone() },
        }
    }
}

pub fn transform<F: Field>(l: &LagSubspace<F>, g: &Gauge<F>) -> Result<LagSubspace<F>> {
    let n = l.fiber_dim();
    g.validate(n)?;
    let elems: Vec<_> = l.elements().iter().map(|e| g.apply(e)).collect();
    Ok(LagSubspace(Subspace::from_elements(n, &elems)?))
}

// ---------------------------------------------------------------------------
// transport along linear maps

/// Differential of a map at a point: a `target × source` Jacobian.
#[derive(Clone, PartialEq, Debug)]
pub struct LinearPointMap<F> {
    pub jacobian: Matrix<F>,
}

impl<F: Field> LinearPointMap<F> {
    pub fn new(jacobian: Matrix<F>) -> Self {
        LinearPointMap { jacobian }
    }

    pub fn identity(n: usize) -> Self {
        LinearPointMap { jacobian: Matrix::identity(n) }
    }

    pub fn source_dim(&self) -> usize {
        self.jacobian.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.jacobian.nrows()
    }

    /// Whether `a = u + ξ` on the source and `b = v + η` on the target are
    /// related: `f_* u = v` and `ξ = f^* η`.
    pub fn relates(&self, a: &FiberElement<F>, b: &FiberElement<F>) -> bool {
        a.dim() == self.source_dim()
            && b.dim() == self.target_dim()
            && self.jacobian.mul_vec(&a.vec) == b.vec
            && self.jacobian.transpose().mul_vec(&b.covec) == a.covec
    }

    /// `f^!(W) = {u + f^*η : f_*u + η ∈ W}` on the source fiber.
    pub fn pullback(&self, w: &LagSubspace<F>) -> Result<LagSubspace<F>> {
        let (m, n) = (self.target_dim(), self.source_dim());
        if w.fiber_dim() != m {
            return Err(GeomError::DimensionMismatch { expected: m, got: w.fiber_dim() });
        }
        let b = w.basis();
        let k = b.nrows();
        // unknowns (α, u): Σ α_i w_T,i − A u = 0
        let system = Matrix::from_fn(m, k + n, |i, j| if j < k { b[(j, i)].clone() } else { -self.jacobian[(i, j - k)].clone() });
        let at = self.jacobian.transpose();
        let rows = system
            .kernel()
            .into_iter()
            .map(|sol| {
                let eta: Vec<F> = (0..m).map(|c| dot(&sol[..k], &b.column(m + c))).collect();
                let xi = at.mul_vec(&eta);
                sol[k..].iter().cloned().chain(xi).collect()
            })
            .collect();
        LagSubspace::new(Subspace::new(n, rows)?)
    }

    /// `f_!(W) = {f_*u + η : u + f^*η ∈ W}` on the target fiber.
    pub fn pushforward(&self, w: &LagSubspace<F>) -> Result<LagSubspace<F>> {
        let (m, n) = (self.target_dim(), self.source_dim());
        if w.fiber_dim() != n {
            return Err(GeomError::DimensionMismatch { expected: n, got: w.fiber_dim() });
        }
        let b = w.basis();
        let k = b.nrows();
        // unknowns (α, η): Σ α_i w_T*,i − A^T η = 0
        let system = Matrix::from_fn(n, k + m, |i, j| if j < k { b[(j, n + i)].clone() } else { -self.jacobian[(j - k, i)].clone() });
        let rows = system
            .kernel()
            .into_iter()
            .map(|sol| {
                let u: Vec<F> = (0..n).map(|c| dot(&sol[..k], &b.column(c))).collect();
                let v = self.jacobian.mul_vec(&u);
                v.into_iter().chain(sol[k..].iter().cloned()).collect()
            })
            .collect();
        LagSubspace::new(Subspace::new(m, rows)?)
    }
}

// ---------------------------------------------------------------------------
// relations

/// The two composed relations of a pair, as subspaces of `K^n × K^n`.
#[derive(Clone, PartialEq, Debug)]
pub struct DiamondPair<F> {
    /// `{(u, v) : ∃ξ, u+ξ ∈ L, v+ξ ∈ R}`
    pub tangent: Span<F>,
    /// `{(ξ, η) : ∃w, w+ξ ∈ L, w+η ∈ R}`
    pub cotangent: Span<F>,
    pub duality_holds: bool,
}

/// Composite relation: pairs of `output` blocks of `L`- and `R`-elements
/// whose `shared` blocks agree.
fn compose_relation<F: Field>(l: &Subspace<F>, r: &Subspace<F>, shared_tangent: bool) -> Span<F> {
    let n = l.fiber_dim();
    let (lb, rb) = (l.basis(), r.basis());
    let (kl, kr) = (lb.nrows(), rb.nrows());
    let system = Matrix::from_fn(n, kl + kr, |i, j| {
        if j < kl {
            block(lb.row(j), n, shared_tangent)[i].clone()
        } else {
            -block(rb.row(j - kl), n, shared_tangent)[i].clone()
        }
    });
    let rows = system
        .kernel()
        .into_iter()
        .map(|sol| {
            let mut out = vec![F::zero(); 2 * n];
            for c in 0..n {
                out[c] = dot(&sol[..kl], &lb.column(c + if shared_tangent { n } else { 0 }));
                out[n + c] = dot(&sol[kl..], &rb.column(c + if shared_tangent { n } else { 0 }));
            }
            out
        })
        .collect();
    Span::new(2 * n, rows).unwrap()
}

/// `X^∨ = {(ξ, η) : (x, y) ∈ X ⇒ ξ(x) = η(y)}`.
pub fn dual_relation<F: Field>(x: &Span<F>) -> Span<F> {
    let n = x.ambient() / 2;
    let rows: Vec<Vec<F>> =
        x.rows().into_iter().map(|r| r[..n].iter().cloned().chain(r[n..].iter().map(|v| -v.clone())).collect()).collect();
    Span::new(2 * n, rows).unwrap().annihilator()
}

pub fn diamond<F: Field>(l: &Subspace<F>, r: &Subspace<F>) -> Result<DiamondPair<F>> {
    l.check_same(r)?;
    let tangent = compose_relation(l, r, false);
    let cotangent = compose_relation(l, r, true);
    let duality_holds = dual_relation(&tangent) == cotangent;
    Ok(DiamondPair { tangent, cotangent, duality_holds })
}

// ---------------------------------------------------------------------------

/// Writes `L = Gr(π) ⊛ Gr(F)` with `F = pr_T*(L)°`; returns `(π, F)`.
pub fn decompose<F: Field>(l: &LagSubspace<F>) -> (Matrix<F>, Span<F>) {
    let n = l.fiber_dim();
    let f = l.pr_tstar().annihilator();
    // rows reordered as (ξ, u) so the echelon form exposes independent covector parts
    let swapped: Vec<Vec<F>> = l.basis().rows().map(|r| r[n..].iter().chain(&r[..n]).cloned().collect()).collect();
    let sw = Span::new(2 * n, swapped).unwrap();
    let pairs: Vec<(Vec<F>, Vec<F>)> =
        sw.rows().into_iter().filter(|r| r[..n].iter().any(|x| !x.is_zero())).map(|r| (r[..n].to_vec(), r[n..].to_vec())).collect();
    let k = pairs.len();
    // B(ξ_a, ξ_b) = ξ_b(u_a) on the covector image, extended by zero on a complement
    let mut basis_rows: Vec<Vec<F>> = pairs.iter().map(|(xi, _)| xi.clone()).collect();
    let mut current = Span::new(n, basis_rows.clone()).unwrap();
    for i in 0..n {
        let e: Vec<F> = (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect();
        if !current.contains(&e) {
            basis_rows.push(e);
            current = Span::new(n, basis_rows.clone()).unwrap();
        }
    }
    let b = Matrix::from_fn(n, n, |a, c| if a < k && c < k { dot(&pairs[c].0, &pairs[a].1) } else { F::zero() });
    let p = Matrix::from_rows(n, basis_rows);
    let pinv = p.inverse().expect("completed basis is invertible");
    let pi = pinv.mul(&b).mul(&pinv.transpose());
    (pi, f)
}
