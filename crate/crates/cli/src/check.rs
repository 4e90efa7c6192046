//! Name resolution and arity checks, run before anything is evaluated.

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::{BindKind, Command, Document, Expr, StmtKind, Verb};
use crate::error::{DslError, Pos, Result};

const RESERVED: &[&str] = &["i", "at", "expect"];

#[derive(Clone, Copy)]
enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }

    fn describe(self, noun: &str) -> String {
        let plural = |k: usize| if k == 1 { noun.to_string() } else { format!("{noun}s") };
        match self {
            Arity::Exactly(k) => format!("{k} {}", plural(k)),
            Arity::AtLeast(k) => format!("at least {k} {}", plural(k)),
        }
    }
}

/// Builtin functions usable in expressions.
fn function_arity(name: &str) -> Option<Arity> {
    Some(match name {
        "d" | "conj" | "graph" => Arity::Exactly(1),
        "tangent" | "cotangent" => Arity::Exactly(0),
        "gauge" | "rescale" | "star" | "costar" | "pullback" => Arity::Exactly(2),
        "distribution" | "conormal" => Arity::AtLeast(1),
        _ => return None,
    })
}

fn verb_arity(v: Verb) -> (Arity, Arity) {
    use Arity::*;
    match v {
        Verb::CheckDirac => (Exactly(1), Exactly(0)),
        Verb::Star | Verb::Costar | Verb::Concur | Verb::PairTorsion | Verb::POmega | Verb::Transverse => (Exactly(2), Exactly(0)),
        Verb::Gcs => (Exactly(3), Exactly(0)),
        Verb::Involutive => (AtLeast(1), Exactly(0)),
        Verb::ProbeSmooth => (Exactly(3), AtLeast(1)),
        Verb::ProbePushforward => (Exactly(2), AtLeast(1)),
        Verb::NormalForm => (Exactly(4), Exactly(0)),
        Verb::EvalAt => (Exactly(1), AtLeast(1)),
    }
}

#[derive(Clone)]
enum Entry {
    Manifold,
    Bound { manifold: String },
    Map { source: String },
}

struct Scope {
    manifolds: BTreeMap<String, Vec<String>>,
    names: BTreeMap<String, Entry>,
    current: Option<String>,
}

impl Scope {
    fn define(&mut self, pos: Pos, name: &str, e: Entry) -> Result<()> {
        if RESERVED.contains(&name) {
            return Err(DslError::type_err(pos, format!("`{name}` is a reserved word")));
        }
        if self.names.contains_key(name) {
            return Err(DslError::Duplicate { pos, name: name.into() });
        }
        self.names.insert(name.into(), e);
        Ok(())
    }

    fn coords(&self, manifold: &str) -> &[String] {
        &self.manifolds[manifold]
    }

    fn check_expr(&self, pos: Pos, e: &Expr, coords: &[String]) -> Result<()> {
        let mut err = None;
        e.walk(&mut |x| {
            if err.is_some() {
                return;
            }
            err = match x {
                Expr::Name(n) if !coords.contains(n) && !matches!(self.names.get(n), Some(Entry::Bound { .. } | Entry::Map { .. })) => {
                    Some(DslError::UnknownName { pos, name: n.clone() })
                }
                Expr::Partial(n) if !coords.contains(n) => Some(DslError::UnknownName { pos, name: format!("@{n}") }),
                Expr::Call(f, args) => match function_arity(f) {
                    None => Some(DslError::UnknownName { pos, name: f.clone() }),
                    Some(a) if !a.accepts(args.len()) => {
                        Some(DslError::Arity { pos, what: format!("`{f}`"), expected: a.describe("argument"), got: args.len() })
                    }
                    _ => None,
                },
                _ => None,
            };
        });
        err.map_or(Ok(()), Err)
    }

    fn current(&self, pos: Pos) -> Result<String> {
        self.current.clone().ok_or_else(|| DslError::type_err(pos, "no manifold has been declared"))
    }

    fn command(&self, pos: Pos, c: &Command) -> Result<()> {
        let (args, points) = verb_arity(c.verb);
        let what = format!("`{}`", c.verb.keyword());
        if !args.accepts(c.args.len()) {
            return Err(DslError::Arity { pos, what, expected: args.describe("argument"), got: c.args.len() });
        }
        if !points.accepts(c.points.len()) {
            return Err(DslError::Arity { pos, what, expected: points.describe("point"), got: c.points.len() });
        }
        let mut home = None;
        for (k, a) in c.args.iter().enumerate() {
            if c.verb == Verb::ProbeSmooth && k == 2 {
                if a != "star" && a != "costar" {
                    return Err(DslError::type_err(pos, format!("product kind must be `star` or `costar`, not `{a}`")));
                }
                continue;
            }
            match self.names.get(a) {
                Some(Entry::Bound { manifold }) => {
                    home.get_or_insert_with(|| manifold.clone());
                }
                Some(Entry::Map { source }) => {
                    if c.verb == Verb::ProbePushforward {
                        home = Some(source.clone());
                    }
                }
                _ => return Err(DslError::UnknownName { pos, name: a.clone() }),
            }
        }
        if let Some(m) = home {
            let dim = self.coords(&m).len();
            for p in &c.points {
                if p.len() != dim {
                    return Err(DslError::Arity {
                        pos,
                        what: format!("a point of {m}"),
                        expected: Arity::Exactly(dim).describe("coordinate"),
                        got: p.len(),
                    });
                }
                for e in p {
                    self.check_expr(pos, e, &[])?;
                }
            }
        }
        Ok(())
    }
}

/// Checks that every name resolves, names are unique and arities match.
pub fn check_document(d: &Document) -> Result<()> {
    let mut s = Scope { manifolds: BTreeMap::new(), names: BTreeMap::new(), current: None };
    for stmt in &d.stmts {
        let pos = stmt.pos;
        match &stmt.kind {
            StmtKind::Manifold(m) => {
                if m.coords.len() != m.dim {
                    return Err(DslError::Arity {
                        pos,
                        what: format!("manifold {}", m.name),
                        expected: Arity::Exactly(m.dim).describe("coordinate"),
                        got: m.coords.len(),
                    });
                }
                let mut seen = BTreeSet::new();
                for c in &m.coords {
                    if RESERVED.contains(&c.as_str()) {
                        return Err(DslError::type_err(pos, format!("`{c}` is a reserved word")));
                    }
                    if !seen.insert(c) {
                        return Err(DslError::Duplicate { pos, name: c.clone() });
                    }
                }
                s.define(pos, &m.name, Entry::Manifold)?;
                s.manifolds.insert(m.name.clone(), m.coords.clone());
                s.current = Some(m.name.clone());
            }
            StmtKind::Bind(b) => {
                let m = s.current(pos)?;
                if s.coords(&m).contains(&b.name) {
                    return Err(DslError::Duplicate { pos, name: b.name.clone() });
                }
                s.check_expr(pos, &b.value, s.coords(&m))?;
                if let (BindKind::Endo, Expr::List(rows)) = (b.kind, &b.value) {
                    let n = s.coords(&m).len();
                    let bad = rows.len() != n || rows.iter().any(|r| !matches!(r, Expr::List(r) if r.len() == n));
                    if bad {
                        return Err(DslError::Arity {
                            pos,
                            what: format!("endomorphism {}", b.name),
                            expected: format!("a {n}x{n} matrix"),
                            got: rows.len(),
                        });
                    }
                }
                s.define(pos, &b.name, Entry::Bound { manifold: m })?;
            }
            StmtKind::Map(m) => {
                for side in [&m.source, &m.target] {
                    if !s.manifolds.contains_key(side) {
                        return Err(DslError::UnknownName { pos, name: side.clone() });
                    }
                }
                let dim = s.coords(&m.target).len();
                if m.components.len() != dim {
                    return Err(DslError::Arity {
                        pos,
                        what: format!("map {} into {}", m.name, m.target),
                        expected: Arity::Exactly(dim).describe("component"),
                        got: m.components.len(),
                    });
                }
                for e in &m.components {
                    s.check_expr(pos, e, s.coords(&m.source))?;
                }
                s.define(pos, &m.name, Entry::Map { source: m.source.clone() })?;
            }
            StmtKind::Command(c) => s.command(pos, c)?,
        }
    }
    Ok(())
}
