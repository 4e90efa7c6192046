//! Lagrangian families presented by frames of generalized sections.
//!
//! A [`LagFrame`] stands for its family on the dense open set where the
//! evaluated frame keeps full rank. Every verdict computed over the function
//! field is therefore a generic verdict; the probes supply pointwise evidence.

use dirackit_exact::{gcd, Func, Matrix, Poly, Scalar};
use num_traits::{One, Zero};

use crate::calculus::{Bivector, Chart, GenSec, OneForm, PolyMap, TwoForm, VecField};
use crate::error::{GeomError, Result};
use crate::pointwise::{self, LagSubspace, LinearPointMap, Product, Subspace};

#[derive(Clone, PartialEq, Debug)]
pub struct LagFrame {
    chart: Chart,
    sections: Vec<GenSec>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct FrameReport {
    pub isotropic: bool,
    /// Index pairs with a nonzero pairing.
    pub offending_pairs: Vec<(usize, usize)>,
    pub generic_rank: usize,
    pub generic_rank_full: bool,
}

impl FrameReport {
    pub fn is_valid(&self) -> bool {
        self.isotropic && self.generic_rank_full
    }
}

/// A frame triple on which the Courant tensor does not vanish.
#[derive(Clone, PartialEq, Debug)]
pub struct CourantWitness {
    pub indices: (usize, usize, usize),
    pub value: Func,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Involutivity {
    pub involutive: bool,
    pub witness: Option<CourantWitness>,
}

#[derive(Clone, PartialEq, Debug)]
pub enum FrameGauge {
    /// `a ↦ a + ω♯(pr_T a)`
    TwoForm(TwoForm),
    /// `a ↦ a + π♯(pr_T* a)`
    Bivector(Bivector),
    /// `a ↦ t pr_T(a) + pr_T*(a)`
    Rescale(Scalar),
}

impl FrameGauge {
    pub fn apply(&self, s: &GenSec) -> Result<GenSec> {
        match self {
            FrameGauge::TwoForm(w) => Ok(GenSec { vec: s.vec.clone(), covec: s.covec.add(&w.sharp(&s.vec)?)? }),
            FrameGauge::Bivector(p) => Ok(GenSec { vec: s.vec.add(&p.sharp(&s.covec)?)?, covec: s.covec.clone() }),
            FrameGauge::Rescale(t) => {
                if t.is_zero() {
                    return Err(GeomError::ZeroRescale);
                }
                Ok(GenSec { vec: s.vec.scale(&Func::constant(t.clone())), covec: s.covec.clone() })
            }
        }
    }
}

/// Generic frame of a product together with the polynomial off whose zero
/// set the elimination used to compute it stays valid.
#[derive(Clone, PartialEq, Debug)]
pub struct ProductFrame {
    pub frame: LagFrame,
    pub locus: Func,
    pub locus_factors: Vec<Poly>,
    pub lagrangian: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ConcurReport {
    pub concur: bool,
    pub product: ProductFrame,
    pub witness: Option<CourantWitness>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SmoothnessReport {
    pub point: Vec<Scalar>,
    /// Span of the generic product frame evaluated at the point.
    pub generic_fiber: Subspace<Scalar>,
    /// Product of the evaluated fibers.
    pub pointwise_fiber: Subspace<Scalar>,
    pub matches: bool,
    /// Whether the point lies on the genericity locus of the product.
    pub on_locus: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct PushforwardSample {
    pub source_point: Vec<Scalar>,
    pub base_point: Vec<Scalar>,
    pub fiber: LagSubspace<Scalar>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct PushforwardReport {
    pub invariant: bool,
    /// Sorted by base point, then by source point.
    pub samples: Vec<PushforwardSample>,
    /// Pairs of sample indices over the same base point whose pushforwards differ.
    pub disagreements: Vec<(usize, usize)>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct NormalFormReport {
    pub holds: bool,
    pub candidate: LagFrame,
}

fn row_matrix(n: usize, rows: &[GenSec]) -> Matrix<Func> {
    Matrix::from_rows(2 * n, rows.iter().map(|s| s.coords()).collect())
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides the product")
}

/// Clears denominators and polynomial content. The first nonzero entry (the
/// last one for kernel vectors, where it is the free coordinate) gets leading
/// coefficient one.
fn primitive(row: &[Func], from_last: bool) -> Vec<Func> {
    let den = row.iter().fold(Poly::one(), |acc, f| lcm(&acc, f.denom()));
    let nums: Vec<Poly> = row.iter().map(|f| (f.numer() * &den).div_exact(f.denom()).expect("denominator divides lcm")).collect();
    let content = nums.iter().filter(|p| !p.is_zero()).fold(Poly::zero(), |acc, p| if acc.is_zero() { p.monic() } else { gcd(&acc, p) });
    if content.is_zero() {
        return row.to_vec();
    }
    let mut nonzero = nums.iter().filter(|p| !p.is_zero());
    let pick = if from_last { nonzero.next_back() } else { nonzero.next() };
    let lead = pick.map(|p| p.div_exact(&content).unwrap().leading_coefficient()).unwrap();
    let inv = Func::constant(lead).recip().unwrap();
    nums.iter().map(|p| &Func::from_poly(p.div_exact(&content).unwrap()) * &inv).collect()
}

fn add_factor(factors: &mut Vec<Poly>, p: &Poly) {
    if p.is_constant() || p.is_zero() {
        return;
    }
    let m = p.monic();
    if !factors.contains(&m) {
        factors.push(m);
    }
}

fn pivot_factors(factors: &mut Vec<Poly>, m: &Matrix<Func>) {
    for p in m.rref().raw_pivots {
        add_factor(factors, p.numer());
        add_factor(factors, p.denom());
    }
}

impl LagFrame {
    pub fn new(chart: Chart, sections: Vec<GenSec>) -> Result<Self> {
        if sections.iter().any(|s| s.dim() != chart.dim()) {
            return Err(GeomError::ChartMismatch);
        }
        Ok(LagFrame { chart, sections })
    }

    /// Primitive polynomial frame read off the canonical echelon basis.
    pub fn from_subspace(chart: Chart, s: &Subspace<Func>) -> Result<Self> {
        let n = chart.dim();
        if s.fiber_dim() != n {
            return Err(GeomError::ChartMismatch);
        }
        let sections = s.basis().rows().map(|r| GenSec::from_coords(n, &primitive(r, false))).collect();
        Ok(LagFrame { chart, sections })
    }

    pub fn tangent(chart: Chart) -> Self {
        let n = chart.dim();
        LagFrame { sections: (0..n).map(|i| GenSec::from_vec(VecField::basis(n, i))).collect(), chart }
    }

    pub fn cotangent(chart: Chart) -> Self {
        let n = chart.dim();
        LagFrame { sections: (0..n).map(|i| GenSec::from_form(OneForm::basis(n, i))).collect(), chart }
    }

    /// `{π♯(dx_i) + dx_i}`.
    pub fn graph_bivector(chart: Chart, pi: &Bivector) -> Result<Self> {
        let n = chart.dim();
        let sections = (0..n)
            .map(|i| {
                let dx = OneForm::basis(n, i);
                Ok(GenSec { vec: pi.sharp(&dx)?, covec: dx })
            })
            .collect::<Result<_>>()?;
        Ok(LagFrame { chart, sections })
    }

    /// `{∂_i + ω♯(∂_i)}`.
    pub fn graph_two_form(chart: Chart, omega: &TwoForm) -> Result<Self> {
        let n = chart.dim();
        let sections = (0..n)
            .map(|i| {
                let d = VecField::basis(n, i);
                Ok(GenSec { covec: omega.sharp(&d)?, vec: d })
            })
            .collect::<Result<_>>()?;
        Ok(LagFrame { chart, sections })
    }

    /// `E ⊕ E°` from generically independent vector fields spanning `E`.
    pub fn graph_distribution(chart: Chart, fields: &[VecField]) -> Result<Self> {
        let n = chart.dim();
        if fields.iter().any(|u| u.dim() != n) {
            return Err(GeomError::ChartMismatch);
        }
        let m = Matrix::from_rows(n, fields.iter().map(|u| u.0.clone()).collect());
        let rank = m.rank();
        if rank != fields.len() {
            return Err(GeomError::RankDeficient { rank, expected: fields.len() });
        }
        let mut sections: Vec<GenSec> = fields.iter().cloned().map(GenSec::from_vec).collect();
        sections.extend(m.kernel().iter().map(|k| GenSec::from_form(OneForm(primitive(k, true)))));
        Ok(LagFrame { chart, sections })
    }

    /// `E ⊕ E°` from generically independent one-forms spanning `E°`.
    pub fn conormal(chart: Chart, forms: &[OneForm]) -> Result<Self> {
        let n = chart.dim();
        if forms.iter().any(|f| f.dim() != n) {
            return Err(GeomError::ChartMismatch);
        }
        let m = Matrix::from_rows(n, forms.iter().map(|f| f.0.clone()).collect());
        let rank = m.rank();
        if rank != forms.len() {
            return Err(GeomError::RankDeficient { rank, expected: forms.len() });
        }
        let mut sections: Vec<GenSec> = m.kernel().iter().map(|k| GenSec::from_vec(VecField(primitive(k, true)))).collect();
        sections.extend(forms.iter().cloned().map(GenSec::from_form));
        Ok(LagFrame { chart, sections })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn sections(&self) -> &[GenSec] {
        &self.sections
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    /// Coefficient matrix, one row `(u, ξ)` per section.
    pub fn matrix(&self) -> Matrix<Func> {
        row_matrix(self.dim(), &self.sections)
    }

    /// Span over the function field.
    pub fn generic_span(&self) -> Subspace<Func> {
        Subspace::new(self.dim(), self.matrix().to_rows()).expect("rows have the fiber length")
    }

    pub fn spans_same(&self, other: &LagFrame) -> bool {
        self.dim() == other.dim() && self.generic_span() == other.generic_span()
    }

    pub fn validate(&self) -> FrameReport {
        let mut offending_pairs = Vec::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                if !self.sections[i].pairing(&self.sections[j]).expect("same chart").is_zero() {
                    offending_pairs.push((i, j));
                }
            }
        }
        let generic_rank = self.matrix().rank();
        FrameReport { isotropic: offending_pairs.is_empty(), offending_pairs, generic_rank, generic_rank_full: generic_rank == self.dim() }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(GeomError::IndexOutOfRange { index: i, len: self.len() });
        }
        Ok(())
    }

    /// `Υ(s_i, s_j, s_k) = ⟨[s_i, s_j], s_k⟩`.
    pub fn courant(&self, i: usize, j: usize, k: usize) -> Result<Func> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(k)?;
        let s = &self.sections;
        s[i].dorfman(&s[j])?.pairing(&s[k])
    }

    /// On an isotropic frame `Υ` is totally antisymmetric, so increasing
    /// triples suffice.
    pub fn involutivity(&self) -> Involutivity {
        let k = self.len();
        for i in 0..k {
            for j in i + 1..k {
                let b = self.sections[i].dorfman(&self.sections[j]).expect("same chart");
                for l in j + 1..k {
                    let value = b.pairing(&self.sections[l]).expect("same chart");
                    if !value.is_zero() {
                        return Involutivity { involutive: false, witness: Some(CourantWitness { indices: (i, j, l), value }) };
                    }
                }
            }
        }
        Involutivity { involutive: true, witness: None }
    }

    pub fn is_involutive(&self) -> bool {
        self.involutivity().involutive
    }

    /// Valid and involutive.
    pub fn is_dirac(&self) -> bool {
        self.validate().is_valid() && self.is_involutive()
    }

    pub fn transform(&self, g: &FrameGauge) -> Result<LagFrame> {
        match g {
            FrameGauge::TwoForm(w) if w.dim() != self.dim() => return Err(GeomError::ChartMismatch),
            FrameGauge::Bivector(p) if p.dim() != self.dim() => return Err(GeomError::ChartMismatch),
            _ => {}
        }
        let sections = self.sections.iter().map(|s| g.apply(s)).collect::<Result<_>>()?;
        Ok(LagFrame { chart: self.chart.clone(), sections })
    }

    pub fn conjugate(&self) -> Result<LagFrame> {
        if !self.chart.complex {
            return Err(GeomError::NotComplexChart);
        }
        Ok(LagFrame { chart: self.chart.clone(), sections: self.sections.iter().map(|s| s.conj()).collect() })
    }

    /// Span of the evaluated sections; its dimension drops off the generic set.
    pub fn eval(&self, point: &[Scalar]) -> Result<Subspace<Scalar>> {
        let n = self.dim();
        if point.len() != n {
            return Err(GeomError::DimensionMismatch { expected: n, got: point.len() });
        }
        let elems = self.sections.iter().map(|s| s.eval(point)).collect::<Result<Vec<_>>>()?;
        Subspace::from_elements(n, &elems)
    }

    pub fn eval_lagrangian(&self, point: &[Scalar]) -> Result<LagSubspace<Scalar>> {
        LagSubspace::new(self.eval(point)?)
    }
}

// ---------------------------------------------------------------------------

pub fn product(kind: Product, l: &LagFrame, r: &LagFrame) -> Result<ProductFrame> {
    if l.chart != r.chart {
        return Err(GeomError::ChartMismatch);
    }
    let n = l.dim();
    let (lm, rm) = (l.matrix(), r.matrix());
    let matched_tangent = kind == Product::Star;
    let mut factors = Vec::new();
    for m in [&lm, &rm] {
        for f in (0..m.nrows()).flat_map(|i| m.row(i).to_vec()) {
            add_factor(&mut factors, f.denom());
        }
        pivot_factors(&mut factors, m);
    }
    let system = pointwise::product_system(n, &lm, &rm, matched_tangent);
    pivot_factors(&mut factors, &system);
    let raw = pointwise::product_rows(n, &lm, &rm, matched_tangent);
    let raw_m = Matrix::from_rows(2 * n, raw.clone());
    pivot_factors(&mut factors, &raw_m);
    let span = Subspace::new(n, raw)?;
    let frame = LagFrame::from_subspace(l.chart.clone(), &span)?;
    pivot_factors(&mut factors, &frame.matrix());
    factors.sort_by_key(|a| (a.total_degree(), a.leading_monomial().cloned()));
    let locus = factors.iter().fold(Func::one(), |acc, p| &acc * &Func::from_poly(p.clone()));
    let lagrangian = span.is_lagrangian();
    Ok(ProductFrame { frame, locus, locus_factors: factors, lagrangian })
}

pub fn star(l: &LagFrame, r: &LagFrame) -> Result<ProductFrame> {
    product(Product::Star, l, r)
}

pub fn costar(l: &LagFrame, r: &LagFrame) -> Result<ProductFrame> {
    product(Product::Costar, l, r)
}

/// Weak concurrence: `L ⊛ R` is involutive on the dense open set where the
/// generic frame is valid.
pub fn concur_weak(l: &LagFrame, r: &LagFrame) -> Result<ConcurReport> {
    for (name, f) in [("left", l), ("right", r)] {
        let rep = f.validate();
        if !rep.is_valid() {
            return Err(GeomError::InvalidInput(format!("{name} frame is not a Lagrangian frame")));
        }
        if !f.is_involutive() {
            return Err(GeomError::InvalidInput(format!("{name} frame is not involutive")));
        }
    }
    let product = costar(l, r)?;
    let inv = product.frame.involutivity();
    Ok(ConcurReport { concur: inv.involutive, witness: inv.witness, product })
}

/// `f^!(R)` over the source function field.
pub fn pullback(map: &PolyMap, source: &Chart, r: &LagFrame) -> Result<LagFrame> {
    let (n, m) = (source.dim(), r.dim());
    if map.source_dim != n {
        return Err(GeomError::DimensionMismatch { expected: n, got: map.source_dim });
    }
    if map.target_dim() != m {
        return Err(GeomError::DimensionMismatch { expected: m, got: map.target_dim() });
    }
    let rows = r.matrix().rows().map(|row| row.iter().map(|f| map.pull_func(f)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    let w = Subspace::new(m, rows)?;
    if w.dim() != m {
        return Err(GeomError::RankCollapse { rank: w.dim(), expected: m });
    }
    let w = LagSubspace::new(w)?;
    let out = LinearPointMap::new(map.jacobian()).pullback(&w)?;
    LagFrame::from_subspace(source.clone(), &out)
}

/// Pushes `L` forward pointwise at each sample and compares the results over
/// samples sharing a base point.
pub fn pushforward_probe(map: &PolyMap, l: &LagFrame, samples: &[Vec<Scalar>]) -> Result<PushforwardReport> {
    if map.source_dim != l.dim() {
        return Err(GeomError::DimensionMismatch { expected: l.dim(), got: map.source_dim });
    }
    let jac = map.jacobian();
    let mut out = Vec::new();
    for p in samples {
        let fiber = l.eval_lagrangian(p)?;
        let a = jac.try_map(|f| f.eval(p).map_err(GeomError::from))?;
        let pushed = LinearPointMap::new(a).pushforward(&fiber)?;
        out.push(PushforwardSample { source_point: p.clone(), base_point: map.eval(p)?, fiber: pushed });
    }
    out.sort_by(|a, b| {
        let ord = |x: &[Scalar], y: &[Scalar]| {
            x.iter().zip(y).map(|(s, t)| s.canonical_cmp(t)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        };
        ord(&a.base_point, &b.base_point).then_with(|| ord(&a.source_point, &b.source_point))
    });
    let mut disagreements = Vec::new();
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].base_point == out[j].base_point && out[i].fiber != out[j].fiber {
                disagreements.push((i, j));
            }
        }
    }
    Ok(PushforwardReport { invariant: disagreements.is_empty(), samples: out, disagreements })
}

/// Compares the generic product frame evaluated at a point with the product of
/// the evaluated fibers.
pub fn smoothness_probe(kind: Product, l: &LagFrame, r: &LagFrame, point: &[Scalar]) -> Result<SmoothnessReport> {
    let generic = product(kind, l, r)?;
    let generic_fiber = generic.frame.eval(point)?;
    let pointwise_fiber = pointwise::product_flagged(kind, &l.eval(point)?, &r.eval(point)?)?.result;
    let on_locus = generic.locus.eval(point).map(|v| v.is_zero()).unwrap_or(true);
    Ok(SmoothnessReport { point: point.to_vec(), matches: generic_fiber == pointwise_fiber, generic_fiber, pointwise_fiber, on_locus })
}

/// Checks `L = ℛ_{dα} p^! Gr(π)` over the function field.
pub fn normal_form_verify(l: &LagFrame, alpha: &OneForm, map: &PolyMap, pi: &Bivector) -> Result<NormalFormReport> {
    if !pi.is_poisson() {
        return Err(GeomError::InvalidInput("bivector is not Poisson".into()));
    }
    if alpha.dim() != l.dim() {
        return Err(GeomError::ChartMismatch);
    }
    let base = LagFrame::graph_bivector(Chart::standard(pi.dim()), pi)?;
    let pulled = pullback(map, l.chart(), &base)?;
    let candidate = pulled.transform(&FrameGauge::TwoForm(alpha.d()))?;
    Ok(NormalFormReport { holds: candidate.spans_same(l), candidate })
}
