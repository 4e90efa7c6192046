//! Document syntax tree and its canonical rendering.
//!
//! Sums are kept flat with their terms sorted by rendered text, so two
//! documents that differ only in term order or whitespace have equal trees.

use std::fmt;

use crate::error::Pos;

#[derive(Clone, PartialEq, Debug, Default)]
pub struct Document {
    pub stmts: Vec<Stmt>,
}

/// A statement with the position of its first token. Equality ignores the
/// position.
#[derive(Clone, Debug)]
pub struct Stmt {
    pub pos: Pos,
    pub kind: StmtKind,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Stmt) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum StmtKind {
    Manifold(Manifold),
    Bind(Binding),
    Map(MapDecl),
    Command(Command),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Manifold {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    pub complex: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BindKind {
    VectorField,
    OneForm,
    TwoForm,
    Bivector,
    Endo,
    Section,
    Frame,
}

impl BindKind {
    pub const ALL: [BindKind; 7] = [
        BindKind::VectorField,
        BindKind::OneForm,
        BindKind::TwoForm,
        BindKind::Bivector,
        BindKind::Endo,
        BindKind::Section,
        BindKind::Frame,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BindKind::VectorField => "vectorfield",
            BindKind::OneForm => "oneform",
            BindKind::TwoForm => "twoform",
            BindKind::Bivector => "bivector",
            BindKind::Endo => "endo",
            BindKind::Section => "section",
            BindKind::Frame => "frame",
        }
    }

    pub fn from_keyword(s: &str) -> Option<BindKind> {
        BindKind::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Binding {
    pub kind: BindKind,
    pub name: String,
    pub value: Expr,
}

/// `map p : M -> N = (f1, ..., fk);`
#[derive(Clone, PartialEq, Debug)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub components: Vec<Expr>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verb {
    CheckDirac,
    Star,
    Costar,
    Concur,
    PairTorsion,
    POmega,
    Transverse,
    Gcs,
    Involutive,
    ProbeSmooth,
    ProbePushforward,
    NormalForm,
    EvalAt,
}

impl Verb {
    pub const ALL: [Verb; 13] = [
        Verb::CheckDirac,
        Verb::Star,
        Verb::Costar,
        Verb::Concur,
        Verb::PairTorsion,
        Verb::POmega,
        Verb::Transverse,
        Verb::Gcs,
        Verb::Involutive,
        Verb::ProbeSmooth,
        Verb::ProbePushforward,
        Verb::NormalForm,
        Verb::EvalAt,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Verb::CheckDirac => "check-dirac",
            Verb::Star => "star",
            Verb::Costar => "costar",
            Verb::Concur => "concur",
            Verb::PairTorsion => "pair-torsion",
            Verb::POmega => "pomega",
            Verb::Transverse => "transverse",
            Verb::Gcs => "gcs",
            Verb::Involutive => "involutive",
            Verb::ProbeSmooth => "probe-smooth",
            Verb::ProbePushforward => "probe-pushforward",
            Verb::NormalForm => "normal-form",
            Verb::EvalAt => "eval-at",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.keyword() == s)
    }
}

/// `verb arg* [at (p) (q) ...] [expect true|false];`
#[derive(Clone, PartialEq, Debug)]
pub struct Command {
    pub verb: Verb,
    pub args: Vec<String>,
    pub points: Vec<Vec<Expr>>,
    pub expect: Option<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    /// Non-negative integer literal, without leading zeros.
    Int(String),
    /// The complex unit `i`.
    Unit,
    Name(String),
    /// Coordinate vector field `@x`.
    Partial(String),
    Call(String, Vec<Expr>),
    List(Vec<Expr>),
    /// Flat signed sum; never a single positive term.
    Sum(Vec<(Sign, Expr)>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Wedge product, or a power when both sides are scalars.
    Wedge(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(digits: &str) -> Expr {
        let t = digits.trim_start_matches('0');
        Expr::Int(if t.is_empty() { "0".into() } else { t.into() })
    }

    /// Flattens nested sums and sorts the terms.
    pub fn sum(terms: Vec<(Sign, Expr)>) -> Expr {
        let mut flat = Vec::new();
        for (s, e) in terms {
            match e {
                Expr::Sum(inner) => flat.extend(inner.into_iter().map(|(t, f)| (s.times(t), f))),
                other => flat.push((s, other)),
            }
        }
        flat.sort_by_cached_key(|(s, e)| (e.to_string(), *s));
        if flat.len() == 1 && flat[0].0 == Sign::Plus {
            return flat.pop().unwrap().1;
        }
        Expr::Sum(flat)
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Sum(_) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Wedge(..) => 3,
            _ => 4,
        }
    }

    /// Calls `f` on every sub-expression, parents first.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Call(_, args) | Expr::List(args) => args.iter().for_each(|a| a.walk(f)),
            Expr::Sum(terms) => terms.iter().for_each(|(_, t)| t.walk(f)),
            Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Wedge(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }
}

struct Paren<'a>(&'a Expr, bool);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn comma_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (k, e) in items.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(s) => write!(f, "{s}"),
            Expr::Unit => write!(f, "i"),
            Expr::Name(s) => write!(f, "{s}"),
            Expr::Partial(s) => write!(f, "@{s}"),
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                comma_list(f, args)?;
                write!(f, ")")
            }
            Expr::List(items) => {
                write!(f, "[")?;
                comma_list(f, items)?;
                write!(f, "]")
            }
            Expr::Sum(terms) => {
                for (k, (s, t)) in terms.iter().enumerate() {
                    match (k, s) {
                        (0, Sign::Plus) => {}
                        (0, Sign::Minus) => write!(f, "-")?,
                        (_, Sign::Plus) => write!(f, " + ")?,
                        (_, Sign::Minus) => write!(f, " - ")?,
                    }
                    write!(f, "{}", Paren(t, t.prec() < 2))?;
                }
                Ok(())
            }
            Expr::Mul(a, b) => write!(f, "{}*{}", Paren(a, a.prec() < 2), Paren(b, b.prec() < 3)),
            Expr::Div(a, b) => write!(f, "{}/{}", Paren(a, a.prec() < 2), Paren(b, b.prec() < 3)),
            Expr::Wedge(a, b) => write!(f, "{}^{}", Paren(a, a.prec() < 4), Paren(b, b.prec() < 3)),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verb.keyword())?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        if !self.points.is_empty() {
            write!(f, " at")?;
            for p in &self.points {
                write!(f, " (")?;
                comma_list(f, p)?;
                write!(f, ")")?;
            }
        }
        if let Some(e) = self.expect {
            write!(f, " expect {e}")?;
        }
        Ok(())
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Manifold(m) => {
                write!(f, "manifold {} dim {} coords {}", m.name, m.dim, m.coords.join(" "))?;
                if m.complex {
                    write!(f, " field complex")?;
                }
                write!(f, ";")
            }
            StmtKind::Bind(b) => write!(f, "{} {} = {};", b.kind.keyword(), b.name, b.value),
            StmtKind::Map(m) => {
                write!(f, "map {} : {} -> {} = (", m.name, m.source, m.target)?;
                comma_list(f, &m.components)?;
                write!(f, ");")
            }
            StmtKind::Command(c) => write!(f, "{c};"),
        }
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.stmts.iter().enumerate() {
            if k > 0 && matches!(s.kind, StmtKind::Manifold(_)) {
                writeln!(f)?;
            }
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}

/// Canonical text of a document.
pub fn render_document(d: &Document) -> String {
    d.to_string()
}
