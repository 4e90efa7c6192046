//! Command execution and verdict reports.

use dirackit_core::calculus::{Chart, VecField};
use dirackit_core::compat::{self, GcsData};
use dirackit_core::frames::{self, CourantWitness, LagFrame, ProductFrame};
use dirackit_core::pointwise::{LagSubspace, Parity, Product, Subspace};
use dirackit_exact::Scalar;
use serde_json::{json, Map, Value as Json};

use crate::ast::{Command, Document, StmtKind, Verb};
use crate::error::{AtPos, DslError, Pos, Result};
use crate::eval::{Bound, Ctx, Session, Value};
use crate::format as fmt;

/// Outcome of one command.
#[derive(Clone, PartialEq, Debug)]
pub struct CommandReport {
    pub line: usize,
    pub echo: String,
    pub inputs: Vec<String>,
    /// Main verdict; `None` for commands that only evaluate.
    pub verdict: Option<bool>,
    pub expect: Option<bool>,
    /// Internal cross-checks between independently computed answers.
    pub consistent: Option<bool>,
    pub details: Map<String, Json>,
}

impl CommandReport {
    /// The verdict matches its expectation (true when none is given) and the
    /// cross-checks hold.
    pub fn holds(&self) -> bool {
        let verdict_ok = self.verdict.is_none_or(|v| v == self.expect.unwrap_or(true));
        verdict_ok && self.consistent != Some(false)
    }

    pub fn to_json(&self) -> Json {
        let mut m = self.details.clone();
        m.insert("command".into(), json!(self.echo));
        m.insert("line".into(), json!(self.line));
        m.insert("inputs".into(), json!(self.inputs));
        m.insert("verdict".into(), json!(self.verdict));
        m.insert("holds".into(), json!(self.holds()));
        if let Some(e) = self.expect {
            m.insert("expect".into(), json!(e));
        }
        if let Some(c) = self.consistent {
            m.insert("consistent".into(), json!(c));
        }
        Json::Object(m)
    }
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct RunReport {
    pub commands: Vec<CommandReport>,
}

impl RunReport {
    pub fn all_hold(&self) -> bool {
        self.commands.iter().all(|c| c.holds())
    }

    pub fn to_json(&self) -> Json {
        let failed: Vec<usize> = self.commands.iter().filter(|c| !c.holds()).map(|c| c.line).collect();
        json!({
            "commands": self.commands.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "failed_lines": failed,
            "status": if failed.is_empty() { "ok" } else { "assertion-failed" },
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.commands {
            let verdict = c.verdict.map_or("-".to_string(), |v| v.to_string());
            let mark = if c.holds() { "ok" } else { "FAILED" };
            out.push_str(&format!("line {}: {}  verdict={} [{}]\n", c.line, c.echo, verdict, mark));
            for (k, v) in &c.details {
                if matches!(v, Json::Bool(_) | Json::Number(_) | Json::String(_)) {
                    out.push_str(&format!("    {k}: {v}\n"));
                }
            }
        }
        out
    }
}

/// Evaluates bindings and runs commands in document order.
pub fn run_document(d: &Document) -> Result<RunReport> {
    let mut s = Session::default();
    let mut report = RunReport::default();
    for stmt in &d.stmts {
        let pos = stmt.pos;
        match &stmt.kind {
            StmtKind::Manifold(m) => s.declare_manifold(pos, m)?,
            StmtKind::Bind(b) => s.bind(pos, b.kind, &b.name, &b.value)?,
            StmtKind::Map(m) => s.bind_map(pos, m)?,
            StmtKind::Command(c) => report.commands.push(execute(&s, pos, c)?),
        }
    }
    Ok(report)
}

fn witness(chart: &Chart, w: &Option<CourantWitness>) -> Json {
    match w {
        None => Json::Null,
        Some(w) => json!({ "indices": [w.indices.0, w.indices.1, w.indices.2], "value": fmt::func(chart, &w.value) }),
    }
}

fn product_json(p: &ProductFrame) -> Json {
    let chart = p.frame.chart();
    json!({
        "frame": fmt::frame(&p.frame),
        "generic_rank": p.frame.validate().generic_rank,
        "lagrangian": p.lagrangian,
        "locus": fmt::func(chart, &p.locus),
        "locus_factors": p.locus_factors.iter().map(|f| f.display_with(&chart.names).to_string()).collect::<Vec<_>>(),
    })
}

fn stats_json(s: &Subspace<Scalar>) -> Json {
    match LagSubspace::new(s.clone()) {
        Ok(l) => {
            let st = l.stats();
            json!({
                "lagrangian": true,
                "pr_t_rank": st.pr_t_rank,
                "pr_tstar_rank": st.pr_tstar_rank,
                "parity": if st.parity == Parity::Even { "even" } else { "odd" },
            })
        }
        Err(_) => json!({ "lagrangian": false, "dim": s.dim() }),
    }
}

struct Exec<'a> {
    s: &'a Session,
    pos: Pos,
    cmd: &'a Command,
}

impl<'a> Exec<'a> {
    fn bound(&self, k: usize) -> Result<&'a Bound> {
        self.s.lookup(self.pos, &self.cmd.args[k])
    }

    fn home(&self) -> Result<Ctx<'a>> {
        let b = self.bound(0)?;
        Ok(self.s.ctx(self.pos, &b.manifold))
    }

    /// Argument `k`, required to live on the same manifold as the first one.
    fn arg(&self, k: usize) -> Result<&'a Value> {
        let b = self.bound(k)?;
        let home = &self.bound(0)?.manifold;
        if !matches!(b.value, Value::Map(_)) && &b.manifold != home {
            return Err(DslError::type_err(self.pos, format!("`{}` lives on {}, not on {}", self.cmd.args[k], b.manifold, home)));
        }
        Ok(&b.value)
    }

    fn wrong(&self, k: usize, want: &str) -> DslError {
        let got = self.bound(k).map(|b| b.value.type_name()).unwrap_or("?");
        DslError::type_err(self.pos, format!("`{}` must be a {want}, found a {got}", self.cmd.args[k]))
    }

    fn frame(&self, k: usize) -> Result<LagFrame> {
        let chart = self.home()?.chart.clone();
        match self.arg(k)? {
            Value::Frame(f) => Ok(f.clone()),
            Value::Bivector(p) => LagFrame::graph_bivector(chart, p).at(self.pos),
            Value::TwoForm(w) => LagFrame::graph_two_form(chart, w).at(self.pos),
            _ => Err(self.wrong(k, "frame, bivector or two-form")),
        }
    }

    fn points(&self, ctx: &Ctx<'_>) -> Result<Vec<Vec<Scalar>>> {
        self.cmd.points.iter().map(|p| ctx.point(p)).collect()
    }
}

struct Outcome {
    verdict: Option<bool>,
    consistent: Option<bool>,
    details: Json,
}

fn outcome(verdict: bool, details: Json) -> Outcome {
    Outcome { verdict: Some(verdict), consistent: None, details }
}

fn execute(s: &Session, pos: Pos, cmd: &Command) -> Result<CommandReport> {
    let e = Exec { s, pos, cmd };
    let out = match cmd.verb {
        Verb::CheckDirac => check_dirac(&e)?,
        Verb::Star | Verb::Costar => {
            let (l, r) = (e.frame(0)?, e.frame(1)?);
            let p = if cmd.verb == Verb::Star { frames::star(&l, &r) } else { frames::costar(&l, &r) }.at(pos)?;
            outcome(p.lagrangian, product_json(&p))
        }
        Verb::Concur => concur(&e)?,
        Verb::PairTorsion => pair_torsion(&e)?,
        Verb::POmega => pomega(&e)?,
        Verb::Transverse => transverse(&e)?,
        Verb::Gcs => gcs(&e)?,
        Verb::Involutive => involutive(&e)?,
        Verb::ProbeSmooth => probe_smooth(&e)?,
        Verb::ProbePushforward => probe_pushforward(&e)?,
        Verb::NormalForm => normal_form(&e)?,
        Verb::EvalAt => eval_at(&e)?,
    };
    let Json::Object(details) = out.details else { unreachable!("details are objects") };
    let inputs = cmd.args.clone();
    Ok(CommandReport {
        line: pos.line,
        echo: cmd.to_string(),
        inputs,
        verdict: out.verdict,
        expect: cmd.expect,
        consistent: out.consistent,
        details,
    })
}

fn check_dirac(e: &Exec<'_>) -> Result<Outcome> {
    let l = e.frame(0)?;
    let rep = l.validate();
    let inv = l.involutivity();
    let chart = l.chart();
    let verdict = rep.is_valid() && inv.involutive;
    Ok(outcome(
        verdict,
        json!({
            "isotropic": rep.isotropic,
            "offending_pairs": rep.offending_pairs.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "generic_rank": rep.generic_rank,
            "generic_rank_full": rep.generic_rank_full,
            "involutive": inv.involutive,
            "witness": witness(chart, &inv.witness),
        }),
    ))
}

fn concur(e: &Exec<'_>) -> Result<Outcome> {
    let (l, r) = (e.frame(0)?, e.frame(1)?);
    let rep = frames::concur_weak(&l, &r).at(e.pos)?;
    let chart = l.chart();
    let mut details = json!({
        "concur": rep.concur,
        "product": product_json(&rep.product),
        "witness": witness(chart, &rep.witness),
    });
    if let (Value::Bivector(p), Value::Bivector(q)) = (e.arg(0)?, e.arg(1)?) {
        details["schouten"] = json!(fmt::alt3(chart, &p.schouten(q).at(e.pos)?, false));
    }
    Ok(outcome(rep.concur, details))
}

fn pair_torsion(e: &Exec<'_>) -> Result<Outcome> {
    let (l, r) = (e.frame(0)?, e.frame(1)?);
    let rep = compat::pair_torsion_suite(&l, &r).at(e.pos)?;
    let chart = l.chart();
    let nonzero: Vec<Json> = rep.nonzero.iter().map(|(k, v)| json!({ "tuple": k, "value": fmt::func(chart, v) })).collect();
    Ok(outcome(
        rep.vanishes_on_generated(),
        json!({
            "scope": "generated tuples",
            "tuples": rep.tuples,
            "tangent_rank": rep.tangent_rank,
            "cotangent_rank": rep.cotangent_rank,
            "nonzero": nonzero,
        }),
    ))
}

fn pomega(e: &Exec<'_>) -> Result<Outcome> {
    let ctx = e.home()?;
    let Value::Bivector(pi) = e.arg(0)? else { return Err(e.wrong(0, "bivector")) };
    let Value::TwoForm(omega) = e.arg(1)? else { return Err(e.wrong(1, "two-form")) };
    let rep = compat::p_omega_suite(ctx.chart, pi, omega).at(e.pos)?;
    let chart = ctx.chart;
    let mut o = outcome(
        rep.concur && rep.p_omega && rep.complementary,
        json!({
            "concur": rep.concur,
            "p_omega": rep.p_omega,
            "complementary": rep.complementary,
            "r_omega_vanishes": rep.r_omega.is_zero(),
            "omega_pi_omega": fmt::two_form(chart, &rep.omega_pi_omega),
            "witness": witness(chart, &rep.witness),
        }),
    );
    o.consistent = Some(rep.agree());
    Ok(o)
}

fn transverse(e: &Exec<'_>) -> Result<Outcome> {
    let ctx = e.home()?;
    let chart = ctx.chart;
    match (e.arg(0)?, e.arg(1)?) {
        (Value::Bivector(pl), Value::Bivector(pr)) => {
            let t = compat::transverse_poisson(chart, pl, pr).at(e.pos)?;
            let mut o = outcome(
                t.poisson,
                json!({
                    "kind": "bivector",
                    "omega": fmt::two_form(chart, &t.omega),
                    "pi_lr": fmt::bivector(chart, &t.pi_lr),
                    "product_matches": t.product_matches,
                    "poisson": t.poisson,
                }),
            );
            o.consistent = Some(t.product_matches);
            Ok(o)
        }
        (Value::TwoForm(wl), Value::TwoForm(wr)) => {
            let t = compat::transverse_two_forms(chart, wl, wr).at(e.pos)?;
            let mut o = outcome(
                t.closed,
                json!({
                    "kind": "two-form",
                    "pi": fmt::bivector(chart, &t.pi),
                    "omega_lr": fmt::two_form(chart, &t.omega_lr),
                    "product_matches": t.product_matches,
                    "closed": t.closed,
                    "concur": t.concur,
                }),
            );
            o.consistent = Some(t.product_matches);
            Ok(o)
        }
        _ => Err(DslError::type_err(e.pos, "`transverse` needs two bivectors or two two-forms")),
    }
}

fn gcs(e: &Exec<'_>) -> Result<Outcome> {
    let ctx = e.home()?;
    let chart = ctx.chart;
    let Value::Endo(a) = e.arg(0)? else { return Err(e.wrong(0, "endomorphism")) };
    let Value::Bivector(pi) = e.arg(1)? else { return Err(e.wrong(1, "bivector")) };
    let Value::TwoForm(omega) = e.arg(2)? else { return Err(e.wrong(2, "two-form")) };
    let g = GcsData::new(a.clone(), pi.clone(), omega.clone()).at(e.pos)?;
    let rep = g.validate(chart).at(e.pos)?;
    let mut details = json!({
        "square": rep.square,
        "omega_symmetric": rep.omega_symmetric,
        "pi_symmetric": rep.pi_symmetric,
        "c1": rep.c1,
        "c2": rep.c2,
        "c3": rep.c3,
        "c4": rep.c4,
        "is_gcs": rep.is_gcs(),
        "products": Json::Null,
    });
    let mut consistent = None;
    if rep.is_gcs() && chart.complex {
        let p = compat::gcs_conj_products(chart, &g).at(e.pos)?;
        consistent = Some(p.consistent() && p.star_matches && p.costar_matches);
        details["products"] = json!({
            "frame": fmt::frame(&p.frame),
            "transverse_to_conjugate": p.transverse_to_conjugate,
            "star_matches": p.star_matches,
            "costar_matches": p.costar_matches,
            "concur": p.concur,
            "closed": p.closed,
            "pn": p.pn,
            "omega_n": p.omega_n,
        });
    }
    Ok(Outcome { verdict: Some(rep.is_gcs()), consistent, details })
}

fn involutive(e: &Exec<'_>) -> Result<Outcome> {
    let ctx = e.home()?;
    let fields = (0..e.cmd.args.len())
        .map(|k| match e.arg(k)? {
            Value::Vector(u) => Ok(u.clone()),
            _ => Err(e.wrong(k, "vector field")),
        })
        .collect::<Result<Vec<VecField>>>()?;
    let rep = compat::involutive_structure_suite(ctx.chart, &fields).at(e.pos)?;
    Ok(outcome(
        rep.concur,
        json!({
            "involutive": rep.involutive,
            "escaping_bracket": rep.escaping_bracket.map(|(i, j)| [i, j]),
            "sum_involutive": rep.sum_involutive,
            "concur": rep.concur,
            "witness": witness(ctx.chart, &rep.witness),
            "type": [rep.type_n, rep.type_d],
        }),
    ))
}

fn probe_smooth(e: &Exec<'_>) -> Result<Outcome> {
    let ctx = e.home()?;
    let (l, r) = (e.frame(0)?, e.frame(1)?);
    let kind = if e.cmd.args[2] == "star" { Product::Star } else { Product::Costar };
    let generic = frames::product(kind, &l, &r).at(e.pos)?;
    let mut probes = Vec::new();
    let mut all = true;
    for p in e.points(&ctx)? {
        let rep = frames::smoothness_probe(kind, &l, &r, &p).at(e.pos)?;
        all &= rep.matches;
        probes.push(json!({
            "point": fmt::point(&rep.point),
            "generic_fiber": fmt::fiber(ctx.chart, &rep.generic_fiber),
            "pointwise_fiber": fmt::fiber(ctx.chart, &rep.pointwise_fiber),
            "pointwise_stats": stats_json(&rep.pointwise_fiber),
            "matches": rep.matches,
            "on_locus": rep.on_locus,
        }));
    }
    Ok(outcome(all, json!({ "product": e.cmd.args[2], "generic": product_json(&generic), "probes": probes })))
}

fn probe_pushforward(e: &Exec<'_>) -> Result<Outcome> {
    let Value::Map(m) = e.arg(0)? else { return Err(e.wrong(0, "map")) };
    let src = e.s.ctx(e.pos, &m.source);
    let tgt = e.s.ctx(e.pos, &m.target);
    let l = match e.bound(1)? {
        Bound { manifold, value: Value::Frame(f) } if manifold == &m.source => f.clone(),
        _ => return Err(DslError::type_err(e.pos, format!("`{}` must be a frame on {}", e.cmd.args[1], m.source))),
    };
    let rep = frames::pushforward_probe(&m.map, &l, &e.points(&src)?).at(e.pos)?;
    let samples: Vec<Json> = rep
        .samples
        .iter()
        .map(|s| {
            json!({
                "source_point": fmt::point(&s.source_point),
                "base_point": fmt::point(&s.base_point),
                "fiber": fmt::fiber(tgt.chart, &s.fiber),
            })
        })
        .collect();
    Ok(outcome(
        rep.invariant,
        json!({
            "invariant": rep.invariant,
            "samples": samples,
            "disagreements": rep.disagreements.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        }),
    ))
}

fn normal_form(e: &Exec<'_>) -> Result<Outcome> {
    let l = e.frame(0)?;
    let Value::Form(alpha) = e.arg(1)? else { return Err(e.wrong(1, "one-form")) };
    let Value::Map(m) = e.arg(2)? else { return Err(e.wrong(2, "map")) };
    let pi = match e.bound(3)? {
        Bound { manifold, value: Value::Bivector(p) } if manifold == &m.target => p,
        _ => return Err(DslError::type_err(e.pos, format!("`{}` must be a bivector on {}", e.cmd.args[3], m.target))),
    };
    if m.source != e.bound(0)?.manifold {
        return Err(DslError::type_err(e.pos, format!("map starts on {}, not on {}", m.source, e.bound(0)?.manifold)));
    }
    let rep = frames::normal_form_verify(&l, alpha, &m.map, pi).at(e.pos)?;
    Ok(outcome(rep.holds, json!({ "candidate": fmt::frame(&rep.candidate) })))
}

fn eval_at(e: &Exec<'_>) -> Result<Outcome> {
    let b = e.bound(0)?;
    let ctx = e.s.ctx(e.pos, &b.manifold);
    let chart = ctx.chart;
    let pos = e.pos;
    let mut values = Vec::new();
    for p in e.points(&ctx)? {
        let value = match &b.value {
            Value::Scalar(f) => json!(fmt::scalar(&f.eval(&p).at(pos)?)),
            Value::Vector(u) => json!(fmt::point(&u.eval(&p).at(pos)?)),
            Value::Form(x) => json!(fmt::point(&x.eval(&p).at(pos)?)),
            Value::Section(s) => json!(fmt::fiber(chart, &Subspace::new(chart.dim(), vec![s.eval(&p).at(pos)?.coords()]).at(pos)?)),
            Value::TwoForm(w) => json!(matrix_rows(&w.eval(&p).at(pos)?)),
            Value::Bivector(q) => json!(matrix_rows(&q.eval(&p).at(pos)?)),
            Value::Endo(a) => json!(matrix_rows(&a.eval(&p).at(pos)?)),
            Value::Frame(f) => {
                let fib = f.eval(&p).at(pos)?;
                json!({ "fiber": fmt::fiber(chart, &fib), "stats": stats_json(&fib) })
            }
            Value::Map(m) => json!(fmt::point(&m.map.eval(&p).at(pos)?)),
            Value::List(_) => return Err(DslError::type_err(pos, "cannot evaluate a list")),
        };
        values.push(json!({ "point": fmt::point(&p), "value": value }));
    }
    Ok(Outcome { verdict: None, consistent: None, details: json!({ "kind": b.value.type_name(), "values": values }) })
}

fn matrix_rows(m: &dirackit_exact::Matrix<Scalar>) -> Vec<Vec<String>> {
    m.rows().map(fmt::point).collect()
}
