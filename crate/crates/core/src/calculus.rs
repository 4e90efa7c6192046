//! Coordinate tensor calculus with rational-function coefficients.
//!
//! Tensors carry their dimension only; the variable names live in [`Chart`].
//! Operations combining tensors of different dimension fail with
//! [`GeomError::ChartMismatch`].

use std::fmt;

use dirackit_exact::{Func, Matrix, Scalar};
use num_traits::{One, Zero};

use crate::error::{GeomError, Result};
use crate::pointwise::FiberElement;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chart {
    pub names: Vec<String>,
    pub complex: bool,
}

impl Chart {
    pub fn new(names: Vec<String>, complex: bool) -> Result<Self> {
        if names.is_empty() {
            return Err(GeomError::InvalidInput("a chart needs at least one coordinate".into()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(GeomError::InvalidInput(format!("duplicate coordinate name {a}")));
            }
        }
        Ok(Chart { names, complex })
    }

    /// Chart with coordinates `x1, ..., xn`.
    pub fn standard(n: usize) -> Self {
        Chart { names: (1..=n).map(|i| format!("x{i}")).collect(), complex: false }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn coord(&self, i: usize) -> Func {
        Func::var(i)
    }

    pub fn fmt_func(&self, f: &Func) -> String {
        f.display_with(&self.names).to_string()
    }
}

fn same(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(GeomError::ChartMismatch)
    }
}

pub(crate) fn sum<I: IntoIterator<Item = Func>>(it: I) -> Func {
    it.into_iter().fold(Func::zero(), |a, b| if b.is_zero() { a } else { &a + &b })
}

pub(crate) fn mul(a: &Func, b: &Func) -> Func {
    if a.is_zero() || b.is_zero() {
        Func::zero()
    } else {
        a * b
    }
}

fn dot(a: &[Func], b: &[Func]) -> Func {
    sum(a.iter().zip(b).map(|(x, y)| mul(x, y)))
}

fn eval_all(fs: &[Func], p: &[Scalar]) -> Result<Vec<Scalar>> {
    fs.iter().map(|f| f.eval(p).map_err(GeomError::from)).collect()
}

/// Differential of a function.
pub fn d_func(f: &Func, n: usize) -> OneForm {
    OneForm((0..n).map(|i| f.partial(i)).collect())
}

// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Debug)]
pub struct VecField(pub Vec<Func>);

#[derive(Clone, PartialEq, Debug)]
pub struct OneForm(pub Vec<Func>);

macro_rules! tuple_tensor {
    ($t:ident) => {
        impl $t {
            pub fn zero(n: usize) -> Self {
                $t(vec![Func::zero(); n])
            }

            /// The `i`-th coordinate field or differential.
            pub fn basis(n: usize, i: usize) -> Self {
                let mut c = vec![Func::zero(); n];
                c[i] = Func::one();
                $t(c)
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|c| c.is_zero())
            }

            pub fn add(&self, o: &$t) -> Result<$t> {
                same(self.dim(), o.dim())?;
                Ok($t(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect()))
            }

            pub fn sub(&self, o: &$t) -> Result<$t> {
                same(self.dim(), o.dim())?;
                Ok($t(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect()))
            }

            pub fn neg(&self) -> $t {
                $t(self.0.iter().map(|a| -a.clone()).collect())
            }

            pub fn scale(&self, f: &Func) -> $t {
                $t(self.0.iter().map(|a| mul(a, f)).collect())
            }

            pub fn conj(&self) -> $t {
                $t(self.0.iter().map(|a| a.conj()).collect())
            }

            pub fn eval(&self, p: &[Scalar]) -> Result<Vec<Scalar>> {
                eval_all(&self.0, p)
            }

            pub fn map(&self, f: impl Fn(&Func) -> Result<Func>) -> Result<$t> {
                Ok($t(self.0.iter().map(f).collect::<Result<_>>()?))
            }
        }
    };
}

tuple_tensor!(VecField);
tuple_tensor!(OneForm);

impl VecField {
    /// Derivative of a function along the field.
    pub fn apply(&self, f: &Func) -> Func {
        sum(self.0.iter().enumerate().map(|(i, u)| if u.is_zero() { Func::zero() } else { mul(u, &f.partial(i)) }))
    }

    pub fn bracket(&self, v: &VecField) -> Result<VecField> {
        same(self.dim(), v.dim())?;
        Ok(VecField((0..self.dim()).map(|j| &self.apply(&v.0[j]) - &v.apply(&self.0[j])).collect()))
    }

    pub fn wedge(&self, v: &VecField) -> Result<Bivector> {
        same(self.dim(), v.dim())?;
        let n = self.dim();
        Ok(Bivector(Matrix::from_fn(n, n, |i, j| &mul(&self.0[i], &v.0[j]) - &mul(&self.0[j], &v.0[i]))))
    }
}

impl OneForm {
    /// `ι_u ξ = ξ(u)`.
    pub fn pair(&self, u: &VecField) -> Result<Func> {
        same(self.dim(), u.dim())?;
        Ok(dot(&self.0, &u.0))
    }

    /// `(dα)_ij = ∂_i α_j − ∂_j α_i`.
    pub fn d(&self) -> TwoForm {
        let n = self.dim();
        TwoForm(Matrix::from_fn(n, n, |i, j| &self.0[j].partial(i) - &self.0[i].partial(j)))
    }

    /// `ℒ_u η = ι_u dη + d(ι_u η)`.
    pub fn lie(&self, u: &VecField) -> Result<OneForm> {
        same(self.dim(), u.dim())?;
        let a = self.d().sharp(u)?;
        let b = d_func(&self.pair(u)?, self.dim());
        a.add(&b)
    }

    pub fn wedge(&self, b: &OneForm) -> Result<TwoForm> {
        same(self.dim(), b.dim())?;
        let n = self.dim();
        Ok(TwoForm(Matrix::from_fn(n, n, |i, j| &mul(&self.0[i], &b.0[j]) - &mul(&self.0[j], &b.0[i]))))
    }
}

// ---------------------------------------------------------------------------

fn check_skew(m: &Matrix<Func>) -> Result<()> {
    crate::pointwise::check_skew(m, m.nrows())
}

/// Two-form as an antisymmetric coefficient matrix, `ω = ½ Σ ω_ij dx_i∧dx_j`.
#[derive(Clone, PartialEq, Debug)]
pub struct TwoForm(Matrix<Func>);

/// Bivector as an antisymmetric coefficient matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Bivector(Matrix<Func>);

macro_rules! skew_tensor {
    ($t:ident) => {
        impl $t {
            pub fn new(m: Matrix<Func>) -> Result<Self> {
                check_skew(&m)?;
                Ok($t(m))
            }

            pub fn zero(n: usize) -> Self {
                $t(Matrix::zeros(n, n))
            }

            /// Coefficient `c` on the pair `(i, j)`, that is `c e_i∧e_j`.
            pub fn elementary(n: usize, i: usize, j: usize, c: Func) -> Self {
                let mut m = Matrix::zeros(n, n);
                if i != j {
                    m[(i, j)] = c.clone();
                    m[(j, i)] = -c;
                }
                $t(m)
            }

            pub fn matrix(&self) -> &Matrix<Func> {
                &self.0
            }

            pub fn dim(&self) -> usize {
                self.0.nrows()
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }

            pub fn get(&self, i: usize, j: usize) -> &Func {
                &self.0[(i, j)]
            }

            pub fn add(&self, o: &$t) -> Result<$t> {
                same(self.dim(), o.dim())?;
                Ok($t(self.0.add(&o.0)))
            }

            pub fn sub(&self, o: &$t) -> Result<$t> {
                same(self.dim(), o.dim())?;
                Ok($t(self.0.sub(&o.0)))
            }

            pub fn neg(&self) -> $t {
                $t(self.0.neg())
            }

            pub fn scale(&self, f: &Func) -> $t {
                $t(self.0.map(|a| mul(a, f)))
            }

            pub fn conj(&self) -> $t {
                $t(self.0.map(|a| a.conj()))
            }

            pub fn eval(&self, p: &[Scalar]) -> Result<Matrix<Scalar>> {
                self.0.try_map(|f| f.eval(p).map_err(GeomError::from))
            }

            pub fn map(&self, f: impl Fn(&Func) -> Result<Func>) -> Result<$t> {
                Ok($t(self.0.try_map(f)?))
            }
        }
    };
}

skew_tensor!(TwoForm);
skew_tensor!(Bivector);

impl TwoForm {
    /// `ω♯(u) = ι_u ω = ω(u,·)`.
    pub fn sharp(&self, u: &VecField) -> Result<OneForm> {
        same(self.dim(), u.dim())?;
        let n = self.dim();
        Ok(OneForm((0..n).map(|j| dot(&u.0, &self.0.column(j))).collect()))
    }

    /// `(dω)_ijk = ∂_i ω_jk + ∂_j ω_ki + ∂_k ω_ij`.
    pub fn d(&self) -> Alt3 {
        let w = &self.0;
        Alt3::from_fn(self.dim(), |i, j, k| sum([w[(j, k)].partial(i), w[(k, i)].partial(j), w[(i, j)].partial(k)]))
    }

    pub fn pair(&self, u: &VecField, v: &VecField) -> Result<Func> {
        self.sharp(u)?.pair(v)
    }
}

impl Bivector {
    /// `π♯(ξ) = π(ξ,·)`.
    pub fn sharp(&self, xi: &OneForm) -> Result<VecField> {
        same(self.dim(), xi.dim())?;
        let n = self.dim();
        Ok(VecField((0..n).map(|j| dot(&xi.0, &self.0.column(j))).collect()))
    }

    /// Schouten bracket of bivectors:
    /// `[P,Q]^{ijk} = Σ_l (P^{li} ∂_l Q^{jk} + Q^{li} ∂_l P^{jk}) + cyclic(i,j,k)`.
    pub fn schouten(&self, q: &Bivector) -> Result<Alt3> {
        same(self.dim(), q.dim())?;
        let n = self.dim();
        let (p, qm) = (&self.0, &q.0);
        let dp: Vec<Matrix<Func>> = (0..n).map(|l| p.map(|f| f.partial(l))).collect();
        let dq: Vec<Matrix<Func>> = (0..n).map(|l| qm.map(|f| f.partial(l))).collect();
        let term = |i: usize, j: usize, k: usize| sum((0..n).map(|l| &mul(&p[(l, i)], &dq[l][(j, k)]) + &mul(&qm[(l, i)], &dp[l][(j, k)])));
        Ok(Alt3::from_fn(n, |i, j, k| sum([term(i, j, k), term(j, k, i), term(k, i, j)])))
    }

    pub fn is_poisson(&self) -> bool {
        self.schouten(self).map(|t| t.is_zero()).unwrap_or(false)
    }
}

// ---------------------------------------------------------------------------

/// Totally antisymmetric degree-3 table: a three-form or a trivector.
#[derive(Clone, PartialEq, Debug)]
pub struct Alt3 {
    n: usize,
    data: Vec<Func>,
}

pub type ThreeForm = Alt3;
pub type TriVector = Alt3;

impl Alt3 {
    /// Fills the table from its values on strictly increasing index triples.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Func) -> Self {
        let mut data = vec![Func::zero(); n * n * n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let v = f(i, j, k);
                    if v.is_zero() {
                        continue;
                    }
                    let neg = -v.clone();
                    for (a, b, c, s) in [(i, j, k, &v), (j, k, i, &v), (k, i, j, &v), (j, i, k, &neg), (i, k, j, &neg), (k, j, i, &neg)] {
                        data[(a * n + b) * n + c] = s.clone();
                    }
                }
            }
        }
        Alt3 { n, data }
    }

    pub fn zero(n: usize) -> Self {
        Alt3 { n, data: vec![Func::zero(); n * n * n] }
    }

    /// `c e_i∧e_j∧e_k`.
    pub fn elementary(n: usize, i: usize, j: usize, k: usize, c: Func) -> Self {
        let mut idx = [i, j, k];
        let mut sign = false;
        // bubble sort to find the permutation sign
        for a in 0..3 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = !sign;
                }
            }
        }
        if idx[0] == idx[1] || idx[1] == idx[2] {
            return Alt3::zero(n);
        }
        let c = if sign { -c } else { c };
        Alt3::from_fn(n, |a, b, d| if [a, b, d] == idx { c.clone() } else { Func::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Func {
        &self.data[(i * self.n + j) * self.n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Alt3) -> Result<Alt3> {
        same(self.n, o.n)?;
        Ok(Alt3 { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() })
    }

    pub fn neg(&self) -> Alt3 {
        Alt3 { n: self.n, data: self.data.iter().map(|a| -a.clone()).collect() }
    }

    /// Nonzero coefficients on increasing triples.
    pub fn components(&self) -> Vec<((usize, usize, usize), Func)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        out.push(((i, j, k), c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Contraction in the first slot: `(ι_u Ω)_jk = Σ_i u_i Ω_ijk`.
    pub fn interior(&self, u: &VecField) -> Result<TwoForm> {
        same(self.n, u.dim())?;
        let n = self.n;
        Ok(TwoForm(Matrix::from_fn(n, n, |j, k| sum((0..n).map(|i| mul(&u.0[i], self.get(i, j, k)))))))
    }

    /// Full evaluation `Ω(u, v, w)`.
    pub fn apply3(&self, u: &VecField, v: &VecField, w: &VecField) -> Result<Func> {
        self.interior(u)?.pair(v, w)
    }
}

// ---------------------------------------------------------------------------

/// Generalized section `u + ξ`.
#[derive(Clone, PartialEq, Debug)]
pub struct GenSec {
    pub vec: VecField,
    pub covec: OneForm,
}

impl GenSec {
    pub fn new(vec: VecField, covec: OneForm) -> Result<Self> {
        same(vec.dim(), covec.dim())?;
        Ok(GenSec { vec, covec })
    }

    pub fn zero(n: usize) -> Self {
        GenSec { vec: VecField::zero(n), covec: OneForm::zero(n) }
    }

    pub fn from_vec(vec: VecField) -> Self {
        let n = vec.dim();
        GenSec { vec, covec: OneForm::zero(n) }
    }

    pub fn from_form(covec: OneForm) -> Self {
        let n = covec.dim();
        GenSec { vec: VecField::zero(n), covec }
    }

    /// Coordinates `(u_1..u_n, ξ_1..ξ_n)`.
    pub fn coords(&self) -> Vec<Func> {
        self.vec.0.iter().chain(&self.covec.0).cloned().collect()
    }

    pub fn from_coords(n: usize, c: &[Func]) -> Self {
        GenSec { vec: VecField(c[..n].to_vec()), covec: OneForm(c[n..2 * n].to_vec()) }
    }

    pub fn dim(&self) -> usize {
        self.vec.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero() && self.covec.is_zero()
    }

    pub fn add(&self, o: &GenSec) -> Result<GenSec> {
        Ok(GenSec { vec: self.vec.add(&o.vec)?, covec: self.covec.add(&o.covec)? })
    }

    pub fn sub(&self, o: &GenSec) -> Result<GenSec> {
        Ok(GenSec { vec: self.vec.sub(&o.vec)?, covec: self.covec.sub(&o.covec)? })
    }

    pub fn neg(&self) -> GenSec {
        GenSec { vec: self.vec.neg(), covec: self.covec.neg() }
    }

    pub fn scale(&self, f: &Func) -> GenSec {
        GenSec { vec: self.vec.scale(f), covec: self.covec.scale(f) }
    }

    pub fn conj(&self) -> GenSec {
        GenSec { vec: self.vec.conj(), covec: self.covec.conj() }
    }

    pub fn pr_t(&self) -> GenSec {
        GenSec::from_vec(self.vec.clone())
    }

    pub fn pr_tstar(&self) -> GenSec {
        GenSec::from_form(self.covec.clone())
    }

    /// `⟨u+ξ, v+η⟩ = ξ(v) + η(u)`.
    pub fn pairing(&self, t: &GenSec) -> Result<Func> {
        same(self.dim(), t.dim())?;
        Ok(&self.covec.pair(&t.vec)? + &t.covec.pair(&self.vec)?)
    }

    /// Dorfman bracket `[u+ξ, v+η] = [u,v] + ℒ_u η − ι_v dξ`.
    pub fn dorfman(&self, t: &GenSec) -> Result<GenSec> {
        same(self.dim(), t.dim())?;
        let vec = self.vec.bracket(&t.vec)?;
        let covec = t.covec.lie(&self.vec)?.sub(&self.covec.d().sharp(&t.vec)?)?;
        Ok(GenSec { vec, covec })
    }

    pub fn eval(&self, p: &[Scalar]) -> Result<FiberElement<Scalar>> {
        FiberElement::new(self.vec.eval(p)?, self.covec.eval(p)?)
    }

    pub fn map(&self, f: impl Fn(&Func) -> Result<Func> + Copy) -> Result<GenSec> {
        Ok(GenSec { vec: self.vec.map(f)?, covec: self.covec.map(f)? })
    }
}

// ---------------------------------------------------------------------------

/// Endomorphism of the tangent bundle; `(a u)_i = Σ_j a_ij u_j`.
#[derive(Clone, PartialEq, Debug)]
pub struct Endo(pub Matrix<Func>);

impl Endo {
    pub fn identity(n: usize) -> Self {
        Endo(Matrix::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        Endo(Matrix::zeros(n, n))
    }

    pub fn new(m: Matrix<Func>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(GeomError::ShapeMismatch("endomorphism matrix must be square".into()));
        }
        Ok(Endo(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix<Func> {
        &self.0
    }

    pub fn apply(&self, u: &VecField) -> Result<VecField> {
        same(self.dim(), u.dim())?;
        Ok(VecField(self.0.mul_vec(&u.0)))
    }

    /// Dual action `(a* ξ)(u) = ξ(a u)`.
    pub fn dual(&self, xi: &OneForm) -> Result<OneForm> {
        same(self.dim(), xi.dim())?;
        Ok(OneForm(self.0.transpose().mul_vec(&xi.0)))
    }

    pub fn compose(&self, b: &Endo) -> Result<Endo> {
        same(self.dim(), b.dim())?;
        Ok(Endo(self.0.mul(&b.0)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn conj(&self) -> Endo {
        Endo(self.0.map(|a| a.conj()))
    }

    pub fn eval(&self, p: &[Scalar]) -> Result<Matrix<Scalar>> {
        self.0.try_map(|f| f.eval(p).map_err(GeomError::from))
    }
}

/// `a = π♯ ∘ ω♯`.
pub fn compose_sharps(pi: &Bivector, omega: &TwoForm) -> Result<Endo> {
    same(pi.dim(), omega.dim())?;
    // as column actions ω♯ = ω^T and π♯ = π^T
    Ok(Endo(pi.matrix().transpose().mul(&omega.matrix().transpose())))
}

/// Two-form with `(a ω)♯ = ω♯ ∘ a`, i.e. `(ω a)(u, v) = ω(a u, v)`.
pub fn two_form_after(omega: &TwoForm, a: &Endo) -> Result<Matrix<Func>> {
    same(omega.dim(), a.dim())?;
    Ok(a.matrix().transpose().mul(omega.matrix()))
}

// ---------------------------------------------------------------------------

/// Polynomial (or rational) map between coordinate charts.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMap {
    pub source_dim: usize,
    pub components: Vec<Func>,
}

impl PolyMap {
    pub fn new(source_dim: usize, components: Vec<Func>) -> Result<Self> {
        for c in &components {
            if c.support_len() > source_dim {
                return Err(GeomError::DimensionMismatch { expected: source_dim, got: c.support_len() });
            }
        }
        Ok(PolyMap { source_dim, components })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap { source_dim: n, components: (0..n).map(Func::var).collect() }
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    /// `target × source` matrix of partial derivatives.
    pub fn jacobian(&self) -> Matrix<Func> {
        Matrix::from_fn(self.target_dim(), self.source_dim, |i, j| self.components[i].partial(j))
    }

    /// `f^* g = g ∘ f`.
    pub fn pull_func(&self, g: &Func) -> Result<Func> {
        Ok(g.substitute(&self.components)?)
    }

    pub fn eval(&self, p: &[Scalar]) -> Result<Vec<Scalar>> {
        eval_all(&self.components, p)
    }
}

impl fmt::Display for Alt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = self.components();
        if comps.is_empty() {
            return write!(f, "0");
        }
        for (k, ((i, j, l), c)) in comps.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*e{}^e{}^e{}", c, i + 1, j + 1, l + 1)?;
        }
        Ok(())
    }
}
