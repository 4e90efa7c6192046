//! Evaluation of expressions and bindings to geometric values.

use std::collections::BTreeMap;

use dirackit_core::calculus::{d_func, Bivector, Chart, Endo, GenSec, OneForm, PolyMap, TwoForm, VecField};
use dirackit_core::frames::{self, pullback, FrameGauge, LagFrame};
use dirackit_exact::{Func, Matrix, Rational, Scalar};
use num_traits::{One, ToPrimitive, Zero};

use crate::ast::{BindKind, Expr, Manifold, MapDecl, Sign};
use crate::error::{AtPos, DslError, Pos, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct MapValue {
    pub map: PolyMap,
    pub source: String,
    pub target: String,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Value {
    Scalar(Func),
    Vector(VecField),
    Form(OneForm),
    Section(GenSec),
    TwoForm(TwoForm),
    Bivector(Bivector),
    Endo(Endo),
    Frame(LagFrame),
    Map(MapValue),
    List(Vec<Value>),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Vector(_) => "vector field",
            Value::Form(_) => "one-form",
            Value::Section(_) => "section",
            Value::TwoForm(_) => "two-form",
            Value::Bivector(_) => "bivector",
            Value::Endo(_) => "endomorphism",
            Value::Frame(_) => "frame",
            Value::Map(_) => "map",
            Value::List(_) => "list",
        }
    }

    fn is_zero_scalar(&self) -> bool {
        matches!(self, Value::Scalar(f) if f.is_zero())
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Bound {
    pub manifold: String,
    pub value: Value,
}

/// Charts and bindings accumulated while a document runs.
#[derive(Default)]
pub struct Session {
    pub(crate) charts: BTreeMap<String, Chart>,
    pub(crate) current: Option<String>,
    pub(crate) values: BTreeMap<String, Bound>,
}

/// Evaluation context: the chart whose coordinates are in scope.
pub(crate) struct Ctx<'a> {
    pub session: &'a Session,
    pub manifold: &'a str,
    pub chart: &'a Chart,
    pub pos: Pos,
}

fn mismatch(pos: Pos, op: &str, a: &Value, b: &Value) -> DslError {
    DslError::type_err(pos, format!("cannot apply `{op}` to {} and {}", a.type_name(), b.type_name()))
}

impl Session {
    pub fn declare_manifold(&mut self, pos: Pos, m: &Manifold) -> Result<()> {
        let chart = Chart::new(m.coords.clone(), m.complex).at(pos)?;
        self.charts.insert(m.name.clone(), chart);
        self.current = Some(m.name.clone());
        Ok(())
    }

    pub(crate) fn ctx(&self, pos: Pos, manifold: &str) -> Ctx<'_> {
        let (name, chart) = self.charts.get_key_value(manifold).expect("manifold declared before use");
        Ctx { session: self, manifold: name, chart, pos }
    }

    pub(crate) fn current_ctx(&self, pos: Pos) -> Result<Ctx<'_>> {
        let m = self.current.as_deref().ok_or_else(|| DslError::type_err(pos, "no manifold has been declared"))?;
        Ok(self.ctx(pos, m))
    }

    pub fn bind(&mut self, pos: Pos, kind: BindKind, name: &str, value: &Expr) -> Result<()> {
        let ctx = self.current_ctx(pos)?;
        let v = ctx.eval(value)?;
        let v = ctx.coerce(kind, v)?;
        let manifold = ctx.manifold.to_string();
        self.values.insert(name.to_string(), Bound { manifold, value: v });
        Ok(())
    }

    pub fn bind_map(&mut self, pos: Pos, m: &MapDecl) -> Result<()> {
        let ctx = self.ctx(pos, &m.source);
        let comps = m.components.iter().map(|e| ctx.eval(e).and_then(|v| ctx.scalar(v))).collect::<Result<Vec<_>>>()?;
        let map = PolyMap::new(ctx.chart.dim(), comps).at(pos)?;
        let value = Value::Map(MapValue { map, source: m.source.clone(), target: m.target.clone() });
        self.values.insert(m.name.clone(), Bound { manifold: m.source.clone(), value });
        Ok(())
    }

    pub(crate) fn lookup(&self, pos: Pos, name: &str) -> Result<&Bound> {
        self.values.get(name).ok_or_else(|| DslError::UnknownName { pos, name: name.into() })
    }
}

impl Ctx<'_> {
    fn err(&self, msg: impl Into<String>) -> DslError {
        DslError::type_err(self.pos, msg)
    }

    fn n(&self) -> usize {
        self.chart.dim()
    }

    pub fn scalar(&self, v: Value) -> Result<Func> {
        match v {
            Value::Scalar(f) => Ok(f),
            other => Err(self.err(format!("expected a scalar, found a {}", other.type_name()))),
        }
    }

    /// A constant scalar, as used for points and rescalings.
    pub fn constant(&self, e: &Expr) -> Result<Scalar> {
        let f = self.scalar(self.eval(e)?)?;
        f.constant_value().ok_or_else(|| self.err(format!("`{e}` is not a constant")))
    }

    pub fn point(&self, p: &[Expr]) -> Result<Vec<Scalar>> {
        p.iter().map(|e| self.constant(e)).collect()
    }

    fn name(&self, n: &str) -> Result<Value> {
        if let Some(i) = self.chart.names.iter().position(|c| c == n) {
            return Ok(Value::Scalar(Func::var(i)));
        }
        let b = self.session.lookup(self.pos, n)?;
        if let Value::Map(_) = b.value {
            return Ok(b.value.clone());
        }
        if b.manifold != self.manifold {
            return Err(self.err(format!("`{n}` lives on {}, not on {}", b.manifold, self.manifold)));
        }
        Ok(b.value.clone())
    }

    pub fn eval(&self, e: &Expr) -> Result<Value> {
        match e {
            Expr::Int(s) => {
                let q: Rational = s.parse().map_err(|_| self.err(format!("bad integer `{s}`")))?;
                Ok(Value::Scalar(Func::constant(Scalar::real(q))))
            }
            Expr::Unit => {
                if !self.chart.complex {
                    return Err(self.err(format!("the complex unit needs `field complex` on {}", self.manifold)));
                }
                Ok(Value::Scalar(Func::constant(Scalar::i())))
            }
            Expr::Name(n) => self.name(n),
            Expr::Partial(x) => {
                let i = self.coord_index(x)?;
                Ok(Value::Vector(VecField::basis(self.n(), i)))
            }
            Expr::List(items) => Ok(Value::List(items.iter().map(|x| self.eval(x)).collect::<Result<_>>()?)),
            Expr::Call(f, args) => self.call(f, args),
            Expr::Sum(terms) => {
                let mut acc = Value::Scalar(Func::zero());
                for (s, t) in terms {
                    let v = self.eval(t)?;
                    let v = if *s == Sign::Minus { self.neg(v)? } else { v };
                    acc = self.add(acc, v)?;
                }
                Ok(acc)
            }
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?),
            Expr::Div(a, b) => {
                let d = self.scalar(self.eval(b)?)?;
                let inv = d.recip().map_err(|_| self.err(format!("division by zero in `{e}`")))?;
                self.mul(self.eval(a)?, Value::Scalar(inv))
            }
            Expr::Wedge(a, b) => self.wedge(self.eval(a)?, self.eval(b)?),
        }
    }

    fn coord_index(&self, x: &str) -> Result<usize> {
        self.chart.names.iter().position(|c| c == x).ok_or_else(|| DslError::UnknownName { pos: self.pos, name: format!("@{x}") })
    }

    fn neg(&self, v: Value) -> Result<Value> {
        Ok(match v {
            Value::Scalar(f) => Value::Scalar(-f),
            Value::Vector(u) => Value::Vector(u.neg()),
            Value::Form(x) => Value::Form(x.neg()),
            Value::Section(s) => Value::Section(s.neg()),
            Value::TwoForm(w) => Value::TwoForm(w.neg()),
            Value::Bivector(p) => Value::Bivector(p.neg()),
            Value::Endo(a) => Value::Endo(Endo(a.0.neg())),
            other => return Err(self.err(format!("cannot negate a {}", other.type_name()))),
        })
    }

    fn as_section(v: &Value) -> Option<GenSec> {
        match v {
            Value::Vector(u) => Some(GenSec::from_vec(u.clone())),
            Value::Form(x) => Some(GenSec::from_form(x.clone())),
            Value::Section(s) => Some(s.clone()),
            _ => None,
        }
    }

    fn add(&self, a: Value, b: Value) -> Result<Value> {
        if a.is_zero_scalar() {
            return Ok(b);
        }
        if b.is_zero_scalar() {
            return Ok(a);
        }
        let pos = self.pos;
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
            (Value::Vector(x), Value::Vector(y)) => Value::Vector(x.add(&y).at(pos)?),
            (Value::Form(x), Value::Form(y)) => Value::Form(x.add(&y).at(pos)?),
            (Value::TwoForm(x), Value::TwoForm(y)) => Value::TwoForm(x.add(&y).at(pos)?),
            (Value::Bivector(x), Value::Bivector(y)) => Value::Bivector(x.add(&y).at(pos)?),
            (Value::Endo(x), Value::Endo(y)) => Value::Endo(Endo(x.0.add(&y.0))),
            (a, b) => match (Self::as_section(&a), Self::as_section(&b)) {
                (Some(x), Some(y)) => Value::Section(x.add(&y).at(pos)?),
                _ => return Err(mismatch(pos, "+", &a, &b)),
            },
        })
    }

    fn scale(&self, f: &Func, v: Value) -> Result<Value> {
        Ok(match v {
            Value::Scalar(g) => Value::Scalar(f * &g),
            Value::Vector(u) => Value::Vector(u.scale(f)),
            Value::Form(x) => Value::Form(x.scale(f)),
            Value::Section(s) => Value::Section(s.scale(f)),
            Value::TwoForm(w) => Value::TwoForm(w.scale(f)),
            Value::Bivector(p) => Value::Bivector(p.scale(f)),
            Value::Endo(a) => Value::Endo(Endo(a.0.map(|x| f * x))),
            other => return Err(self.err(format!("cannot scale a {}", other.type_name()))),
        })
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value> {
        match (a, b) {
            (Value::Scalar(f), v) | (v, Value::Scalar(f)) => self.scale(&f, v),
            (Value::Endo(x), Value::Endo(y)) => Ok(Value::Endo(x.compose(&y).at(self.pos)?)),
            (Value::Endo(x), Value::Vector(u)) => Ok(Value::Vector(x.apply(&u).at(self.pos)?)),
            (a, b) => Err(mismatch(self.pos, "*", &a, &b)),
        }
    }

    fn wedge(&self, a: Value, b: Value) -> Result<Value> {
        let pos = self.pos;
        match (a, b) {
            (Value::Vector(u), Value::Vector(v)) => Ok(Value::Bivector(u.wedge(&v).at(pos)?)),
            (Value::Form(x), Value::Form(y)) => Ok(Value::TwoForm(x.wedge(&y).at(pos)?)),
            (Value::Scalar(f), Value::Scalar(k)) => {
                let k = k.constant_value().filter(|c| c.im.is_zero() && c.re.is_integer());
                let k = k.and_then(|c| c.re.to_integer().to_i32()).ok_or_else(|| self.err("exponent must be a constant integer"))?;
                Ok(Value::Scalar(f.pow(k).map_err(|_| self.err("zero raised to a negative power"))?))
            }
            (a, b) => Err(mismatch(pos, "^", &a, &b)),
        }
    }

    fn frame_of(&self, v: Value) -> Result<LagFrame> {
        let chart = self.chart.clone();
        match v {
            Value::Frame(f) => Ok(f),
            Value::Bivector(p) => LagFrame::graph_bivector(chart, &p).at(self.pos),
            Value::TwoForm(w) => LagFrame::graph_two_form(chart, &w).at(self.pos),
            Value::List(items) => {
                let n = self.n();
                let secs = items
                    .iter()
                    .map(|x| {
                        if x.is_zero_scalar() {
                            return Ok(GenSec::zero(n));
                        }
                        Self::as_section(x).ok_or_else(|| self.err(format!("a frame element must be a section, found a {}", x.type_name())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                LagFrame::new(chart, secs).at(self.pos)
            }
            other => Err(self.err(format!("expected a frame, found a {}", other.type_name()))),
        }
    }

    fn call(&self, f: &str, args: &[Expr]) -> Result<Value> {
        let pos = self.pos;
        let chart = || self.chart.clone();
        if f == "pullback" {
            let Value::Map(m) = self.eval(&args[0])? else { return Err(self.err("the first argument of `pullback` must be a map")) };
            if m.source != self.manifold {
                return Err(self.err(format!("map starts on {}, not on {}", m.source, self.manifold)));
            }
            let target = self.session.ctx(pos, &m.target);
            let r = target.frame_of(target.eval(&args[1])?)?;
            return Ok(Value::Frame(pullback(&m.map, self.chart, &r).at(pos)?));
        }
        let vals = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>>>()?;
        Ok(match f {
            "d" => match vals.into_iter().next().unwrap() {
                Value::Scalar(g) => Value::Form(d_func(&g, self.n())),
                Value::Form(x) => Value::TwoForm(x.d()),
                other => return Err(self.err(format!("cannot differentiate a {}", other.type_name()))),
            },
            "conj" => match vals.into_iter().next().unwrap() {
                Value::Scalar(g) => Value::Scalar(g.conj()),
                Value::Vector(u) => Value::Vector(u.conj()),
                Value::Form(x) => Value::Form(x.conj()),
                Value::Section(s) => Value::Section(s.conj()),
                Value::TwoForm(w) => Value::TwoForm(w.conj()),
                Value::Bivector(p) => Value::Bivector(p.conj()),
                Value::Endo(a) => Value::Endo(a.conj()),
                Value::Frame(l) => Value::Frame(l.conjugate().at(pos)?),
                other => return Err(self.err(format!("cannot conjugate a {}", other.type_name()))),
            },
            "graph" => match vals.into_iter().next().unwrap() {
                v @ (Value::Bivector(_) | Value::TwoForm(_)) => Value::Frame(self.frame_of(v)?),
                other => return Err(self.err(format!("`graph` needs a bivector or a two-form, found a {}", other.type_name()))),
            },
            "tangent" => Value::Frame(LagFrame::tangent(chart())),
            "cotangent" => Value::Frame(LagFrame::cotangent(chart())),
            "distribution" => {
                let fields = vals
                    .into_iter()
                    .map(|v| match v {
                        Value::Vector(u) => Ok(u),
                        other => Err(self.err(format!("`distribution` needs vector fields, found a {}", other.type_name()))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Value::Frame(LagFrame::graph_distribution(chart(), &fields).at(pos)?)
            }
            "conormal" => {
                let forms = vals
                    .into_iter()
                    .map(|v| match v {
                        Value::Form(x) => Ok(x),
                        other => Err(self.err(format!("`conormal` needs one-forms, found a {}", other.type_name()))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Value::Frame(LagFrame::conormal(chart(), &forms).at(pos)?)
            }
            "gauge" => {
                let mut it = vals.into_iter();
                let l = self.frame_of(it.next().unwrap())?;
                let g = match it.next().unwrap() {
                    Value::TwoForm(w) => FrameGauge::TwoForm(w),
                    Value::Bivector(p) => FrameGauge::Bivector(p),
                    other => return Err(self.err(format!("`gauge` needs a two-form or a bivector, found a {}", other.type_name()))),
                };
                Value::Frame(l.transform(&g).at(pos)?)
            }
            "rescale" => {
                let mut it = vals.into_iter();
                let l = self.frame_of(it.next().unwrap())?;
                let t = self.scalar(it.next().unwrap())?.constant_value().ok_or_else(|| self.err("rescaling factor must be a constant"))?;
                Value::Frame(l.transform(&FrameGauge::Rescale(t)).at(pos)?)
            }
            "star" | "costar" => {
                let mut it = vals.into_iter();
                let (l, r) = (self.frame_of(it.next().unwrap())?, self.frame_of(it.next().unwrap())?);
                let p = if f == "star" { frames::star(&l, &r) } else { frames::costar(&l, &r) };
                Value::Frame(p.at(pos)?.frame)
            }
            _ => return Err(DslError::UnknownName { pos, name: f.into() }),
        })
    }

    /// Converts an evaluated binding to its declared kind.
    pub fn coerce(&self, kind: BindKind, v: Value) -> Result<Value> {
        let n = self.n();
        let zero = v.is_zero_scalar();
        let bad = |v: &Value| self.err(format!("expected a {}, found a {}", kind.keyword(), v.type_name()));
        Ok(match kind {
            BindKind::VectorField => match v {
                Value::Vector(_) => v,
                _ if zero => Value::Vector(VecField::zero(n)),
                _ => return Err(bad(&v)),
            },
            BindKind::OneForm => match v {
                Value::Form(_) => v,
                _ if zero => Value::Form(OneForm::zero(n)),
                _ => return Err(bad(&v)),
            },
            BindKind::Section => match Self::as_section(&v) {
                Some(s) => Value::Section(s),
                None if zero => Value::Section(GenSec::zero(n)),
                None => return Err(bad(&v)),
            },
            BindKind::TwoForm => match v {
                Value::TwoForm(_) => v,
                _ if zero => Value::TwoForm(TwoForm::zero(n)),
                _ => return Err(bad(&v)),
            },
            BindKind::Bivector => match v {
                Value::Bivector(_) => v,
                _ if zero => Value::Bivector(Bivector::zero(n)),
                _ => return Err(bad(&v)),
            },
            BindKind::Endo => match v {
                Value::Endo(_) => v,
                Value::Scalar(f) => {
                    Value::Endo(Endo(Matrix::identity(n).map(|x: &Func| if x.is_one() { f.clone() } else { Func::zero() })))
                }
                Value::List(rows) => {
                    let rows = rows
                        .into_iter()
                        .map(|r| match r {
                            Value::List(entries) => entries.into_iter().map(|x| self.scalar(x)).collect::<Result<Vec<_>>>(),
                            other => Err(bad(&other)),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                        return Err(self.err(format!("endomorphism matrix must be {n}x{n}")));
                    }
                    Value::Endo(Endo::new(Matrix::from_rows(n, rows)).at(self.pos)?)
                }
                _ => return Err(bad(&v)),
            },
            BindKind::Frame => Value::Frame(self.frame_of(v)?),
        })
    }
}
