//! Printing of symbolic and pointwise objects in document syntax.

use dirackit_core::calculus::{Alt3, Bivector, Chart, GenSec, OneForm, TwoForm, VecField};
use dirackit_core::frames::LagFrame;
use dirackit_core::pointwise::Subspace;
use dirackit_exact::{Func, Scalar};
use num_traits::Zero;

pub fn func(chart: &Chart, f: &Func) -> String {
    chart.fmt_func(f)
}

fn needs_parens(c: &str) -> bool {
    let wrapped = c.starts_with('(') && c.ends_with(')') && !c[1..c.len() - 1].contains(['(', ')']);
    c.contains(' ') && !wrapped
}

/// Joins `coefficient * basis` terms; zero coefficients must be filtered out.
fn combination(terms: impl IntoIterator<Item = (String, String)>) -> String {
    let mut out = String::new();
    for (c, b) in terms {
        let term = match c.as_str() {
            "1" => b,
            "-1" => format!("-{b}"),
            _ if needs_parens(&c) => format!("({c})*{b}"),
            _ => format!("{c}*{b}"),
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn partial(chart: &Chart, i: usize) -> String {
    format!("@{}", chart.names[i])
}

fn differential(chart: &Chart, i: usize) -> String {
    format!("d({})", chart.names[i])
}

fn section_terms<'a>(chart: &'a Chart, coords: &'a [String]) -> impl Iterator<Item = (String, String)> + 'a {
    let n = chart.dim();
    coords.iter().enumerate().filter(|(_, c)| c.as_str() != "0").map(move |(k, c)| {
        let basis = if k < n { partial(chart, k) } else { differential(chart, k - n) };
        (c.clone(), basis)
    })
}

pub fn vector(chart: &Chart, v: &VecField) -> String {
    section(chart, &GenSec::from_vec(v.clone()))
}

pub fn one_form(chart: &Chart, xi: &OneForm) -> String {
    section(chart, &GenSec::from_form(xi.clone()))
}

pub fn section(chart: &Chart, s: &GenSec) -> String {
    let coords: Vec<String> = s.coords().iter().map(|f| func(chart, f)).collect();
    combination(section_terms(chart, &coords))
}

pub fn frame(f: &LagFrame) -> Vec<String> {
    f.sections().iter().map(|s| section(f.chart(), s)).collect()
}

fn pairs(chart: &Chart, get: impl Fn(usize, usize) -> Func, basis: impl Fn(usize) -> String) -> String {
    let n = chart.dim();
    let terms = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    combination(terms.filter_map(|(i, j)| {
        let c = get(i, j);
        (!c.is_zero()).then(|| (func(chart, &c), format!("{}^{}", basis(i), basis(j))))
    }))
}

pub fn two_form(chart: &Chart, w: &TwoForm) -> String {
    pairs(chart, |i, j| w.get(i, j).clone(), |i| differential(chart, i))
}

pub fn bivector(chart: &Chart, p: &Bivector) -> String {
    pairs(chart, |i, j| p.get(i, j).clone(), |i| partial(chart, i))
}

/// Trivector (`forms = false`) or three-form.
pub fn alt3(chart: &Chart, t: &Alt3, forms: bool) -> String {
    let b = |i: usize| if forms { differential(chart, i) } else { partial(chart, i) };
    combination(t.components().into_iter().map(|((i, j, k), c)| (func(chart, &c), format!("{}^{}^{}", b(i), b(j), b(k)))))
}

pub fn scalar(s: &Scalar) -> String {
    s.to_string()
}

pub fn point(p: &[Scalar]) -> Vec<String> {
    p.iter().map(scalar).collect()
}

/// Basis rows of a fiber, printed as constant sections.
pub fn fiber(chart: &Chart, s: &Subspace<Scalar>) -> Vec<String> {
    s.basis()
        .rows()
        .map(|row| {
            let coords: Vec<String> = row.iter().map(|c| if c.is_zero() { "0".into() } else { scalar(c) }).collect();
            combination(section_terms(chart, &coords))
        })
        .collect()
}
