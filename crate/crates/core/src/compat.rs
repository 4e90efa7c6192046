//! Compatibility conditions between Dirac structures and their tensor
//! counterparts: twisted brackets, Nijenhuis torsion, concomitants, PΩ
//! structures, Dirac-pair torsion, transverse compositions, generalized
//! complex structures and involutive structures.
//!
//! Tables are indexed by coordinate basis pairs: `entries[i][j]` is the value
//! on `(∂_i, ∂_j)` or `(dx_i, dx_j)`.

use dirackit_exact::{Func, Matrix, Scalar};
use num_traits::{One, Zero};

use crate::calculus::{Bivector, Chart, Endo, GenSec, OneForm, TwoForm, VecField};
use crate::error::{GeomError, Result};
use crate::frames::{concur_weak, costar, star, CourantWitness, FrameGauge, LagFrame};
use crate::pointwise::{diamond, Span, Subspace};

fn same_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(GeomError::ChartMismatch);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// twisted brackets

/// Endomorphism of `TM ⊕ T*M` used to twist the Dorfman bracket.
#[derive(Clone, Copy, Debug)]
pub enum Twist<'a> {
    /// `u + ξ ↦ a(u) + a*(ξ)`
    Endo(&'a Endo),
    /// `u + ξ ↦ ω♯(u)`
    TwoForm(&'a TwoForm),
    /// `u + ξ ↦ π♯(ξ)`
    Bivector(&'a Bivector),
}

impl Twist<'_> {
    pub fn dim(&self) -> usize {
        match self {
            Twist::Endo(a) => a.dim(),
            Twist::TwoForm(w) => w.dim(),
            Twist::Bivector(p) => p.dim(),
        }
    }

    pub fn apply(&self, s: &GenSec) -> Result<GenSec> {
        match self {
            Twist::Endo(a) => Ok(GenSec { vec: a.apply(&s.vec)?, covec: a.dual(&s.covec)? }),
            Twist::TwoForm(w) => Ok(GenSec::from_form(w.sharp(&s.vec)?)),
            Twist::Bivector(p) => Ok(GenSec::from_vec(p.sharp(&s.covec)?)),
        }
    }
}

/// `[x, y]^b = [b x, y] + [x, b y] − b[x, y]`.
pub fn twisted_dorfman(b: Twist<'_>, x: &GenSec, y: &GenSec) -> Result<GenSec> {
    same_dim(b.dim(), x.dim())?;
    same_dim(b.dim(), y.dim())?;
    let first = b.apply(x)?.dorfman(y)?;
    let second = x.dorfman(&b.apply(y)?)?;
    let third = b.apply(&x.dorfman(y)?)?;
    first.add(&second)?.sub(&third)
}

/// `[u, v]^a = [a u, v] + [u, a v] − a[u, v]`.
pub fn twisted_bracket(a: &Endo, u: &VecField, v: &VecField) -> Result<VecField> {
    let s = twisted_dorfman(Twist::Endo(a), &GenSec::from_vec(u.clone()), &GenSec::from_vec(v.clone()))?;
    Ok(s.vec)
}

/// `[u, v]^ω = [ω u, v] + [u, ω v] − ω[u, v]`, which equals `ι_v ι_u dω`.
pub fn twisted_form_bracket(omega: &TwoForm, u: &VecField, v: &VecField) -> Result<OneForm> {
    let s = twisted_dorfman(Twist::TwoForm(omega), &GenSec::from_vec(u.clone()), &GenSec::from_vec(v.clone()))?;
    debug_assert_eq!(s.covec, omega.d().interior(u)?.sharp(v)?);
    Ok(s.covec)
}

/// Koszul bracket `[ξ, η]^π = ℒ_{π♯ξ} η − ι_{π♯η} dξ`.
pub fn koszul(pi: &Bivector, xi: &OneForm, eta: &OneForm) -> Result<OneForm> {
    let s = twisted_dorfman(Twist::Bivector(pi), &GenSec::from_form(xi.clone()), &GenSec::from_form(eta.clone()))?;
    Ok(s.covec)
}

/// Bracket `[u, v]^{π^ω} = [ω u, v]^π + [u, ω v]^π` of the algebroid dual to
/// `(T*M, [·,·]^π)` twisted by `ω`.
pub fn complementary_bracket(pi: &Bivector, omega: &TwoForm, u: &VecField, v: &VecField) -> Result<VecField> {
    let (su, sv) = (GenSec::from_vec(u.clone()), GenSec::from_vec(v.clone()));
    let wu = GenSec::from_form(omega.sharp(u)?);
    let wv = GenSec::from_form(omega.sharp(v)?);
    let a = twisted_dorfman(Twist::Bivector(pi), &wu, &sv)?;
    let b = twisted_dorfman(Twist::Bivector(pi), &su, &wv)?;
    Ok(a.add(&b)?.vec)
}

// ---------------------------------------------------------------------------
// tables

#[derive(Clone, PartialEq, Debug)]
pub struct Table<T> {
    pub entries: Vec<Vec<T>>,
}

impl<T> Table<T> {
    fn build(n: usize, mut f: impl FnMut(usize, usize) -> Result<T>) -> Result<Self> {
        let entries = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Ok(Table { entries })
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i][j]
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

macro_rules! table_zero {
    ($t:ty) => {
        impl Table<$t> {
            pub fn is_zero(&self) -> bool {
                self.entries.iter().flatten().all(|e| e.is_zero())
            }

            /// Index pairs with a nonzero entry.
            pub fn support(&self) -> Vec<(usize, usize)> {
                let mut out = Vec::new();
                for (i, row) in self.entries.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        if !e.is_zero() {
                            out.push((i, j));
                        }
                    }
                }
                out
            }
        }
    };
}

table_zero!(VecField);
table_zero!(OneForm);

fn vec_table(n: usize, f: impl Fn(&VecField, &VecField) -> Result<VecField>) -> Result<Table<VecField>> {
    Table::build(n, |i, j| f(&VecField::basis(n, i), &VecField::basis(n, j)))
}

fn form_table(n: usize, f: impl Fn(&VecField, &VecField) -> Result<OneForm>) -> Result<Table<OneForm>> {
    Table::build(n, |i, j| f(&VecField::basis(n, i), &VecField::basis(n, j)))
}

// ---------------------------------------------------------------------------
// Nijenhuis torsion and concomitants

/// `N(a)(u, v) = a[u, v]^a − [a u, a v]` on coordinate pairs.
pub fn nijenhuis(a: &Endo) -> Result<Table<VecField>> {
    vec_table(a.dim(), |u, v| a.apply(&twisted_bracket(a, u, v)?)?.sub(&a.apply(u)?.bracket(&a.apply(v)?)?))
}

/// `π(a*ξ, η) = π(ξ, a*η)`, i.e. `a π = π a^T` as matrices.
pub fn bivector_is_symmetric(a: &Endo, pi: &Bivector) -> Result<bool> {
    same_dim(a.dim(), pi.dim())?;
    Ok(a.matrix().mul(pi.matrix()) == pi.matrix().mul(&a.matrix().transpose()))
}

/// `ω(a u, v) = ω(u, a v)`, i.e. `a^T ω = ω a` as matrices.
pub fn two_form_is_symmetric(a: &Endo, omega: &TwoForm) -> Result<bool> {
    same_dim(a.dim(), omega.dim())?;
    Ok(a.matrix().transpose().mul(omega.matrix()) == omega.matrix().mul(a.matrix()))
}

/// `C(a, π)(ξ, η) = a*[ξ, η]^π − ([a*ξ, π♯η] + [π♯ξ, a*η])` on `(dx_i, dx_j)`.
pub fn concomitant_pi(a: &Endo, pi: &Bivector) -> Result<Table<OneForm>> {
    if !bivector_is_symmetric(a, pi)? {
        return Err(GeomError::NotSymmetricWithTwist("bivector"));
    }
    let n = a.dim();
    Table::build(n, |i, j| {
        let (xi, eta) = (OneForm::basis(n, i), OneForm::basis(n, j));
        let first = a.dual(&koszul(pi, &xi, &eta)?)?;
        let b1 = GenSec::from_form(a.dual(&xi)?).dorfman(&GenSec::from_vec(pi.sharp(&eta)?))?;
        let b2 = GenSec::from_vec(pi.sharp(&xi)?).dorfman(&GenSec::from_form(a.dual(&eta)?))?;
        first.sub(&b1.add(&b2)?.covec)
    })
}

/// `C(a, ω)(u, v) = [a u, ω♯v] + [ω♯u, a v] − ω♯[u, v]^a + a*[u, v]^ω` on `(∂_i, ∂_j)`.
pub fn concomitant_omega(a: &Endo, omega: &TwoForm) -> Result<Table<OneForm>> {
    if !two_form_is_symmetric(a, omega)? {
        return Err(GeomError::NotSymmetricWithTwist("two-form"));
    }
    form_table(a.dim(), |u, v| {
        let b1 = GenSec::from_vec(a.apply(u)?).dorfman(&GenSec::from_form(omega.sharp(v)?))?;
        let b2 = GenSec::from_form(omega.sharp(u)?).dorfman(&GenSec::from_vec(a.apply(v)?))?;
        let t = omega.sharp(&twisted_bracket(a, u, v)?)?;
        b1.add(&b2)?.covec.sub(&t)?.add(&a.dual(&twisted_form_bracket(omega, u, v)?)?)
    })
}

// ---------------------------------------------------------------------------
// tensors from their sharps

/// Bivector whose sharp is `f`; fails when the result is not skew.
pub fn bivector_from_sharp(n: usize, f: impl Fn(&OneForm) -> Result<VecField>) -> Result<Bivector> {
    let rows = (0..n).map(|i| f(&OneForm::basis(n, i)).map(|v| v.0)).collect::<Result<Vec<_>>>()?;
    Bivector::new(Matrix::from_rows(n, rows))
}

/// Two-form whose sharp is `f`; fails when the result is not skew.
pub fn two_form_from_sharp(n: usize, f: impl Fn(&VecField) -> Result<OneForm>) -> Result<TwoForm> {
    let rows = (0..n).map(|i| f(&VecField::basis(n, i)).map(|v| v.0)).collect::<Result<Vec<_>>>()?;
    TwoForm::new(Matrix::from_rows(n, rows))
}

fn power(a: &Endo, k: u32) -> Result<Endo> {
    let mut p = Endo::identity(a.dim());
    for _ in 0..k {
        p = p.compose(a)?;
    }
    Ok(p)
}

/// `π_k` with `π_k♯ = a^k ∘ π♯`.
pub fn bivector_ladder(a: &Endo, pi: &Bivector, k: u32) -> Result<Bivector> {
    let ak = power(a, k)?;
    bivector_from_sharp(pi.dim(), |xi| ak.apply(&pi.sharp(xi)?)).map_err(|_| GeomError::NotSymmetricWithTwist("bivector"))
}

/// `ω_k` with `ω_k♯ = ω♯ ∘ a^k`.
pub fn two_form_ladder(omega: &TwoForm, a: &Endo, k: u32) -> Result<TwoForm> {
    let ak = power(a, k)?;
    two_form_from_sharp(omega.dim(), |u| omega.sharp(&ak.apply(u)?)).map_err(|_| GeomError::NotSymmetricWithTwist("two-form"))
}

/// `ω π ω`, the two-form with sharp `ω♯ π♯ ω♯`.
pub fn omega_pi_omega(pi: &Bivector, omega: &TwoForm) -> Result<TwoForm> {
    same_dim(pi.dim(), omega.dim())?;
    two_form_from_sharp(omega.dim(), |u| omega.sharp(&pi.sharp(&omega.sharp(u)?)?))
}

/// `a = π♯ ∘ ω♯`.
pub fn pi_omega(pi: &Bivector, omega: &TwoForm) -> Result<Endo> {
    crate::calculus::compose_sharps(pi, omega)
}

// ---------------------------------------------------------------------------
// PΩ structures

#[derive(Clone, PartialEq, Debug)]
pub struct POmegaReport {
    /// `Gr(π)` and `Gr(ω)` concur weakly.
    pub concur: bool,
    /// `ωπω` is closed.
    pub p_omega: bool,
    /// `ω♯[u, v]^{π^ω} = [ω♯u, ω♯v]^π`.
    pub complementary: bool,
    /// `R_ω(u, v) = ω♯[u, v]^a − [ω♯u, ω♯v]^π` with `a = π♯ω♯`.
    pub r_omega: Table<OneForm>,
    pub omega_pi_omega: TwoForm,
    pub witness: Option<CourantWitness>,
}

impl POmegaReport {
    pub fn agree(&self) -> bool {
        self.concur == self.p_omega && self.p_omega == self.complementary
    }
}

pub fn p_omega_suite(chart: &Chart, pi: &Bivector, omega: &TwoForm) -> Result<POmegaReport> {
    let n = chart.dim();
    same_dim(n, pi.dim())?;
    same_dim(n, omega.dim())?;
    if !pi.is_poisson() {
        return Err(GeomError::InvalidInput("bivector is not Poisson".into()));
    }
    if !omega.d().is_zero() {
        return Err(GeomError::InvalidInput("two-form is not closed".into()));
    }
    let rep = concur_weak(&LagFrame::graph_bivector(chart.clone(), pi)?, &LagFrame::graph_two_form(chart.clone(), omega)?)?;
    let wpw = omega_pi_omega(pi, omega)?;
    let a = pi_omega(pi, omega)?;
    let r_omega = form_table(n, |u, v| omega.sharp(&twisted_bracket(&a, u, v)?)?.sub(&koszul(pi, &omega.sharp(u)?, &omega.sharp(v)?)?))?;
    let complementary =
        form_table(n, |u, v| omega.sharp(&complementary_bracket(pi, omega, u, v)?)?.sub(&koszul(pi, &omega.sharp(u)?, &omega.sharp(v)?)?))?
            .is_zero();
    Ok(POmegaReport { concur: rep.concur, p_omega: wpw.d().is_zero(), complementary, r_omega, omega_pi_omega: wpw, witness: rep.witness })
}

// ---------------------------------------------------------------------------
// Dirac-pair torsion

/// A point of the relation space: `(u_L, u_R), (v_L, v_R) ∈ L ♦_T R` and
/// `(ζ_LR, ζ_R), (ζ_L, ζ_LR) ∈ L ♦_T* R`.
#[derive(Clone, PartialEq, Debug)]
pub struct TorsionTuple {
    pub u_l: VecField,
    pub u_r: VecField,
    pub v_l: VecField,
    pub v_r: VecField,
    pub zeta_l: OneForm,
    pub zeta_lr: OneForm,
    pub zeta_r: OneForm,
}

/// Generic bases of the two composite relations.
#[derive(Clone, PartialEq, Debug)]
pub struct RelationSpaces {
    pub tangent: Span<Func>,
    pub cotangent: Span<Func>,
    /// Basis of `{(ζ_L, ζ_LR, ζ_R)}` with both cotangent memberships.
    pub zeta_triples: Vec<(OneForm, OneForm, OneForm)>,
}

fn concat(a: &[Func], b: &[Func]) -> Vec<Func> {
    a.iter().chain(b).cloned().collect()
}

pub fn relation_spaces(l: &LagFrame, r: &LagFrame) -> Result<RelationSpaces> {
    if l.chart() != r.chart() {
        return Err(GeomError::ChartMismatch);
    }
    let n = l.dim();
    let pair = diamond(&l.generic_span(), &r.generic_span())?;
    let c = pair.cotangent.rows();
    let k = c.len();
    // Σα c = (ζ_LR, ζ_R), Σβ c = (ζ_L, ζ_LR): first half of Σα c equals second half of Σβ c
    let system = Matrix::from_fn(n, 2 * k, |i, j| if j < k { c[j][i].clone() } else { -c[j - k][n + i].clone() });
    let zeta_triples = system
        .kernel()
        .into_iter()
        .map(|sol| {
            let comb =
                |coef: &[Func], col: usize| -> Func { coef.iter().zip(&c).fold(Func::zero(), |acc, (x, row)| &acc + &(x * &row[col])) };
            let (alpha, beta) = sol.split_at(k);
            let zl = OneForm((0..n).map(|i| comb(beta, i)).collect());
            let zlr = OneForm((0..n).map(|i| comb(beta, n + i)).collect());
            let zr = OneForm((0..n).map(|i| comb(alpha, n + i)).collect());
            (zl, zlr, zr)
        })
        .collect();
    Ok(RelationSpaces { tangent: pair.tangent, cotangent: pair.cotangent, zeta_triples })
}

impl RelationSpaces {
    pub fn check(&self, t: &TorsionTuple) -> Result<()> {
        if !self.tangent.contains(&concat(&t.u_l.0, &t.u_r.0)) {
            return Err(GeomError::NotInRelationSpace("(u_L, u_R)".into()));
        }
        if !self.tangent.contains(&concat(&t.v_l.0, &t.v_r.0)) {
            return Err(GeomError::NotInRelationSpace("(v_L, v_R)".into()));
        }
        if !self.cotangent.contains(&concat(&t.zeta_lr.0, &t.zeta_r.0)) {
            return Err(GeomError::NotInRelationSpace("(ζ_LR, ζ_R)".into()));
        }
        if !self.cotangent.contains(&concat(&t.zeta_l.0, &t.zeta_lr.0)) {
            return Err(GeomError::NotInRelationSpace("(ζ_L, ζ_LR)".into()));
        }
        Ok(())
    }
}

fn torsion_value(t: &TorsionTuple) -> Result<Func> {
    let a = t.u_l.bracket(&t.v_l)?;
    let b = t.u_l.bracket(&t.v_r)?.add(&t.u_r.bracket(&t.v_l)?)?;
    let c = t.u_r.bracket(&t.v_r)?;
    Ok(&(&t.zeta_l.pair(&a)? - &t.zeta_lr.pair(&b)?) + &t.zeta_r.pair(&c)?)
}

/// `⟨[u_L, v_L], ζ_L⟩ − ⟨[u_L, v_R] + [u_R, v_L], ζ_LR⟩ + ⟨[u_R, v_R], ζ_R⟩`.
pub fn dirac_pair_torsion(l: &LagFrame, r: &LagFrame, t: &TorsionTuple) -> Result<Func> {
    relation_spaces(l, r)?.check(t)?;
    torsion_value(t)
}

/// Deterministic family of admissible tuples: echelon basis elements of
/// `L ♦_T R` times multipliers `1, x_1, …, x_n`, combined with every basis
/// triple of covectors.
pub fn generated_tuples(l: &LagFrame, r: &LagFrame) -> Result<Vec<TorsionTuple>> {
    let spaces = relation_spaces(l, r)?;
    let n = l.dim();
    let multipliers: Vec<Func> = std::iter::once(Func::one()).chain((0..n).map(Func::var)).collect();
    let mut pairs = Vec::new();
    for row in spaces.tangent.rows() {
        for m in &multipliers {
            let scaled: Vec<Func> = row.iter().map(|x| x * m).collect();
            pairs.push((VecField(scaled[..n].to_vec()), VecField(scaled[n..].to_vec())));
        }
    }
    let mut out = Vec::new();
    for (u_l, u_r) in &pairs {
        for (v_l, v_r) in &pairs {
            for (zl, zlr, zr) in &spaces.zeta_triples {
                out.push(TorsionTuple {
                    u_l: u_l.clone(),
                    u_r: u_r.clone(),
                    v_l: v_l.clone(),
                    v_r: v_r.clone(),
                    zeta_l: zl.clone(),
                    zeta_lr: zlr.clone(),
                    zeta_r: zr.clone(),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Debug)]
pub struct TorsionReport {
    pub tuples: usize,
    pub tangent_rank: usize,
    pub cotangent_rank: usize,
    /// Nonzero torsion values with the index of their tuple.
    pub nonzero: Vec<(usize, Func)>,
}

impl TorsionReport {
    /// Verdict on the generated tuples only.
    pub fn vanishes_on_generated(&self) -> bool {
        self.nonzero.is_empty()
    }
}

pub fn pair_torsion_suite(l: &LagFrame, r: &LagFrame) -> Result<TorsionReport> {
    let spaces = relation_spaces(l, r)?;
    let tuples = generated_tuples(l, r)?;
    let mut nonzero = Vec::new();
    for (i, t) in tuples.iter().enumerate() {
        let v = torsion_value(t)?;
        if !v.is_zero() {
            nonzero.push((i, v));
        }
    }
    Ok(TorsionReport { tuples: tuples.len(), tangent_rank: spaces.tangent.dim(), cotangent_rank: spaces.cotangent.dim(), nonzero })
}

// ---------------------------------------------------------------------------
// transverse compositions

#[derive(Clone, PartialEq, Debug)]
pub struct TransversePoisson {
    /// `ω♯ = (π_R♯ − π_L♯)^{-1}`
    pub omega: TwoForm,
    /// `π_LR♯ = π_L♯ ω♯ π_R♯`
    pub pi_lr: Bivector,
    /// `Gr(π_LR) = Gr(π_L) ⋆ Gr(−π_R)`
    pub product_matches: bool,
    pub poisson: bool,
}

pub fn transverse_poisson(chart: &Chart, pi_l: &Bivector, pi_r: &Bivector) -> Result<TransversePoisson> {
    same_dim(chart.dim(), pi_l.dim())?;
    same_dim(chart.dim(), pi_r.dim())?;
    let w = pi_r.matrix().sub(pi_l.matrix()).inverse().ok_or(GeomError::NotTransverse)?;
    let omega = TwoForm::new(w.clone())?;
    let pi_lr = Bivector::new(pi_r.matrix().mul(&w).mul(pi_l.matrix()))?;
    let l = LagFrame::graph_bivector(chart.clone(), pi_l)?;
    let r = LagFrame::graph_bivector(chart.clone(), pi_r)?.transform(&FrameGauge::Rescale(-Scalar::one()))?;
    let product_matches = star(&l, &r)?.frame.spans_same(&LagFrame::graph_bivector(chart.clone(), &pi_lr)?);
    let poisson = pi_lr.is_poisson();
    Ok(TransversePoisson { omega, pi_lr, product_matches, poisson })
}

#[derive(Clone, PartialEq, Debug)]
pub struct TransverseTwoForms {
    /// `π♯ = (ω_R♯ − ω_L♯)^{-1}`
    pub pi: Bivector,
    /// `ω_LR♯ = ω_L♯ π♯ ω_R♯`
    pub omega_lr: TwoForm,
    /// `Gr(ω_LR) = Gr(ω_L) ⊛ Gr(−ω_R)`
    pub product_matches: bool,
    pub closed: bool,
    pub concur: bool,
}

pub fn transverse_two_forms(chart: &Chart, omega_l: &TwoForm, omega_r: &TwoForm) -> Result<TransverseTwoForms> {
    same_dim(chart.dim(), omega_l.dim())?;
    same_dim(chart.dim(), omega_r.dim())?;
    let p = omega_r.matrix().sub(omega_l.matrix()).inverse().ok_or(GeomError::NotTransverse)?;
    let pi = Bivector::new(p.clone())?;
    let omega_lr = TwoForm::new(omega_r.matrix().mul(&p).mul(omega_l.matrix()))?;
    let l = LagFrame::graph_two_form(chart.clone(), omega_l)?;
    let r = LagFrame::graph_two_form(chart.clone(), omega_r)?;
    let product_matches = costar(&l, &r.transform(&FrameGauge::Rescale(-Scalar::one()))?)?
        .frame
        .spans_same(&LagFrame::graph_two_form(chart.clone(), &omega_lr)?);
    let concur = concur_weak(&l, &r)?.concur;
    Ok(TransverseTwoForms { pi, closed: omega_lr.d().is_zero(), omega_lr, product_matches, concur })
}

// ---------------------------------------------------------------------------
// generalized complex structures

#[derive(Clone, PartialEq, Debug)]
pub struct GcsData {
    pub a: Endo,
    pub pi: Bivector,
    pub omega: TwoForm,
}

#[derive(Clone, PartialEq, Debug)]
pub struct GcsReport {
    /// `a² + π♯ω♯ = −id`
    pub square: bool,
    /// `a*ω♯ = ω♯a`
    pub omega_symmetric: bool,
    /// `aπ♯ = π♯a*`
    pub pi_symmetric: bool,
    /// `π` is Poisson.
    pub c1: bool,
    /// `C(a, π) = 0`
    pub c2: bool,
    /// `N(a)(u, v) = −π♯[u, v]^ω`
    pub c3: bool,
    /// `C(a, ω) = 0`
    pub c4: bool,
}

impl GcsReport {
    pub fn algebraic(&self) -> bool {
        self.square && self.omega_symmetric && self.pi_symmetric
    }

    pub fn is_gcs(&self) -> bool {
        self.algebraic() && self.c1 && self.c2 && self.c3 && self.c4
    }
}

impl GcsData {
    pub fn new(a: Endo, pi: Bivector, omega: TwoForm) -> Result<Self> {
        same_dim(a.dim(), pi.dim())?;
        same_dim(a.dim(), omega.dim())?;
        Ok(GcsData { a, pi, omega })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Block matrix `[[a, π♯], [ω♯, −a*]]` acting on columns `(u, ξ)`.
    pub fn j_matrix(&self) -> Matrix<Func> {
        let n = self.dim();
        let (a, p, w) = (self.a.matrix(), self.pi.matrix(), self.omega.matrix());
        Matrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a.row(i)[j].clone(),
            (true, false) => p.row(j - n)[i].clone(),
            (false, true) => w.row(j)[i - n].clone(),
            (false, false) => -a.row(j - n)[i - n].clone(),
        })
    }

    pub fn validate(&self, chart: &Chart) -> Result<GcsReport> {
        same_dim(chart.dim(), self.dim())?;
        let n = self.dim();
        let (a, pt, wt) = (self.a.matrix(), self.pi.matrix().transpose(), self.omega.matrix().transpose());
        let square = a.mul(a).add(&pt.mul(&wt)) == Matrix::identity(n).neg();
        let omega_symmetric = two_form_is_symmetric(&self.a, &self.omega)?;
        let pi_symmetric = bivector_is_symmetric(&self.a, &self.pi)?;
        let c1 = LagFrame::graph_bivector(chart.clone(), &self.pi)?.is_involutive();
        let c2 = pi_symmetric && concomitant_pi(&self.a, &self.pi)?.is_zero();
        let nij = nijenhuis(&self.a)?;
        let rhs = vec_table(n, |u, v| Ok(self.pi.sharp(&twisted_form_bracket(&self.omega, u, v)?)?.neg()))?;
        let c3 = nij == rhs;
        let c4 = omega_symmetric && concomitant_omega(&self.a, &self.omega)?.is_zero();
        Ok(GcsReport { square, omega_symmetric, pi_symmetric, c1, c2, c3, c4 })
    }

    /// `L = {J e + i e}` over the standard generators of `TM ⊕ T*M`.
    pub fn eigenframe(&self, chart: &Chart) -> Result<LagFrame> {
        if !chart.complex {
            return Err(GeomError::NotComplexChart);
        }
        if !self.validate(chart)?.algebraic() {
            return Err(GeomError::InvalidGcs("algebraic identities fail".into()));
        }
        let n = self.dim();
        let j = self.j_matrix();
        let i = Func::constant(Scalar::i());
        let rows: Vec<Vec<Func>> =
            (0..2 * n).map(|k| (0..2 * n).map(|r| if r == k { &j.row(r)[k] + &i } else { j.row(r)[k].clone() }).collect()).collect();
        let s = Subspace::new(n, rows)?;
        if s.dim() != n {
            return Err(GeomError::InvalidGcs(format!("eigenbundle has rank {}", s.dim())));
        }
        LagFrame::from_subspace(chart.clone(), &s)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct GcsProducts {
    pub frame: LagFrame,
    /// `L ∩ L̄ = 0` generically.
    pub transverse_to_conjugate: bool,
    /// `L ⋆ ℛ_{−1}(L̄) = Gr(π/(2i))`
    pub star_matches: bool,
    /// `L ⊛ ℛ_{−1}(L̄) = Gr(ω/(2i))`
    pub costar_matches: bool,
    pub concur: bool,
    pub closed: bool,
    /// `(π, a)` is a PN-structure.
    pub pn: bool,
    /// `(ω, a)` is an ΩN-structure.
    pub omega_n: bool,
}

impl GcsProducts {
    /// Concurrence with the conjugate agrees with `dω = 0` and with PN + ΩN.
    pub fn consistent(&self) -> bool {
        self.concur == self.closed && self.concur == (self.pn && self.omega_n)
    }
}

pub fn gcs_conj_products(chart: &Chart, g: &GcsData) -> Result<GcsProducts> {
    let report = g.validate(chart)?;
    if !report.is_gcs() {
        return Err(GeomError::InvalidGcs("integrability conditions fail".into()));
    }
    let l = g.eigenframe(chart)?;
    let lbar = l.conjugate()?;
    let n = g.dim();
    let transverse_to_conjugate = l.generic_span().sum(&lbar.generic_span())?.dim() == 2 * n;
    let minus = lbar.transform(&FrameGauge::Rescale(-Scalar::one()))?;
    let half_i = Func::constant(Scalar::one() / (Scalar::i() + Scalar::i()));
    let star_matches = star(&l, &minus)?.frame.spans_same(&LagFrame::graph_bivector(chart.clone(), &g.pi.scale(&half_i))?);
    let costar_matches = costar(&l, &minus)?.frame.spans_same(&LagFrame::graph_two_form(chart.clone(), &g.omega.scale(&half_i))?);
    let concur = concur_weak(&l, &lbar)?.concur;
    let closed = g.omega.d().is_zero();
    let nijenhuis_zero = nijenhuis(&g.a)?.is_zero();
    let pn = report.c1 && nijenhuis_zero && report.c2;
    let omega_n = closed && nijenhuis_zero && report.c4;
    Ok(GcsProducts { frame: l, transverse_to_conjugate, star_matches, costar_matches, concur, closed, pn, omega_n })
}

// ---------------------------------------------------------------------------
// involutive structures

#[derive(Clone, PartialEq, Debug)]
pub struct InvolutiveReport {
    pub involutive: bool,
    /// Generator pair whose bracket leaves `E`.
    pub escaping_bracket: Option<(usize, usize)>,
    /// `E + Ē` is involutive.
    pub sum_involutive: bool,
    /// `Gr(E)` and `Gr(Ē)` concur weakly.
    pub concur: bool,
    pub witness: Option<CourantWitness>,
    /// Type `(n, d)` with `d = rank(E ∩ Ē)` and `n = rank E − d`.
    pub type_n: usize,
    pub type_d: usize,
}

fn escaping(fields: &[VecField], target: &Span<Func>) -> Result<Option<(usize, usize)>> {
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            if !target.contains(&fields[i].bracket(&fields[j])?.0) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn involutive_structure_suite(chart: &Chart, fields: &[VecField]) -> Result<InvolutiveReport> {
    let n = chart.dim();
    let gr = LagFrame::graph_distribution(chart.clone(), fields)?;
    let conj_fields: Vec<VecField> = fields.iter().map(|u| u.conj()).collect();
    let gr_bar = if chart.complex { gr.conjugate()? } else { gr.clone() };
    let e = Span::new(n, fields.iter().map(|u| u.0.clone()).collect())?;
    let ebar = Span::new(n, conj_fields.iter().map(|u| u.0.clone()).collect())?;
    let both = e.sum(&ebar);
    let escaping_bracket = escaping(fields, &e)?;
    let all: Vec<VecField> = fields.iter().chain(&conj_fields).cloned().collect();
    let sum_involutive = escaping(&all, &both)?.is_none();
    let inv = costar(&gr, &gr_bar)?.frame.involutivity();
    let d = e.dim() + ebar.dim() - both.dim();
    Ok(InvolutiveReport {
        involutive: escaping_bracket.is_none(),
        escaping_bracket,
        sum_involutive,
        concur: inv.involutive,
        witness: inv.witness,
        type_n: e.dim() - d,
        type_d: d,
    })
}
