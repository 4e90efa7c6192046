//! Acceptance suite. Prints one line per criterion and exits non-zero when any
//! criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use dirackit_core::calculus::{d_func, Bivector, Chart, Endo, GenSec, OneForm, PolyMap, TwoForm, VecField};
use dirackit_core::compat::{
    bivector_ladder, concomitant_omega, concomitant_pi, gcs_conj_products, involutive_structure_suite, nijenhuis, omega_pi_omega,
    p_omega_suite, pair_torsion_suite, pi_omega, GcsData,
};
use dirackit_core::frames::{self, concur_weak, normal_form_verify, pullback, pushforward_probe, smoothness_probe, FrameGauge, LagFrame};
use dirackit_core::pointwise::{self, diamond, pairing, transform, Gauge, LagSubspace, LinearPointMap, Product, Span, Subspace};
use dirackit_exact::{BigRational, Field, Func, Matrix, Monomial, Poly, Scalar};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value as Json;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Q = BigRational;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------------------
// helpers

fn x(i: usize) -> Func {
    Func::var(i)
}

fn c(n: i64) -> Func {
    Func::from_int(n)
}

fn i_f() -> Func {
    Func::constant(Scalar::i())
}

fn point(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&a| Scalar::from_int(a)).collect()
}

fn chart(n: usize) -> Chart {
    Chart::standard(n)
}

fn complex_chart(n: usize) -> Chart {
    let mut ch = Chart::standard(n);
    ch.complex = true;
    ch
}

fn sec(v: VecField, f: OneForm) -> GenSec {
    GenSec::new(v, f).unwrap()
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Runs a fixture document and returns its command reports as JSON.
fn run_fixture(name: &str) -> Result<Vec<Json>, String> {
    let path = fixtures_dir().join(name);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = dirackit::parse_document(&text).map_err(|e| format!("{name}:{e}"))?;
    let report = dirackit::run_document(&doc).map_err(|e| format!("{name}:{e}"))?;
    match report.to_json()["commands"].clone() {
        Json::Array(v) => Ok(v),
        _ => Err("report has no command list".into()),
    }
}

fn find<'a>(cmds: &'a [Json], command: &str) -> Result<&'a Json, String> {
    cmds.iter().find(|c| c["command"] == command).ok_or_else(|| format!("no command `{command}`"))
}

fn strings(v: &Json) -> Vec<String> {
    v.as_array().map(|a| a.iter().filter_map(|s| s.as_str().map(String::from)).collect()).unwrap_or_default()
}

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn small(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-2..=2))
}

fn random_skew(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Matrix<Q> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                let v = small(rng);
                m[(i, j)] = v.clone();
                m[(j, i)] = -v;
            }
        }
    }
    m
}

/// `ℛ_ω ℛ_π (F ⊕ F°)` with random ingredients; every Lagrangian fiber has this shape.
fn random_lagrangian(rng: &mut ChaCha8Rng, n: usize) -> LagSubspace<Q> {
    let k = rng.gen_range(0..=n);
    let rows = (0..k).map(|_| (0..n).map(|_| small(rng)).collect()).collect();
    let mut l = LagSubspace::graph_distribution(&Span::new(n, rows).unwrap());
    if rng.gen_bool(0.7) {
        l = transform(&l, &Gauge::Bivector(random_skew(rng, n, 0.6))).unwrap();
    }
    if rng.gen_bool(0.5) {
        l = transform(&l, &Gauge::TwoForm(random_skew(rng, n, 0.5))).unwrap();
    }
    l
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> Func {
    let terms = (0..rng.gen_range(0..=4)).map(|_| {
        let mut e = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=deg) {
            e[rng.gen_range(0..n)] += 1;
        }
        (Monomial::new(e), Scalar::from_int(rng.gen_range(-3..=3)))
    });
    Func::from_poly(Poly::from_terms(terms))
}

fn random_constant_bivector(rng: &mut ChaCha8Rng, n: usize) -> Bivector {
    let mut b = Bivector::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            b = b.add(&Bivector::elementary(n, i, j, c(rng.gen_range(-2..=2)))).unwrap();
        }
    }
    b
}

fn constant_dirac(rng: &mut ChaCha8Rng, n: usize) -> LagFrame {
    let to_func = |m: &Matrix<Q>| m.map(|q| Func::constant(Scalar::real(q.clone())));
    let m = random_skew(rng, n, 0.6);
    let w = random_skew(rng, n, 0.5);
    LagFrame::graph_bivector(chart(n), &Bivector::new(to_func(&m)).unwrap())
        .unwrap()
        .transform(&FrameGauge::TwoForm(TwoForm::new(to_func(&w)).unwrap()))
        .unwrap()
}

fn combo(frame: &LagFrame, coef: &[Func]) -> GenSec {
    frame.sections().iter().zip(coef).fold(GenSec::zero(frame.dim()), |acc, (s, f)| acc.add(&s.scale(f)).unwrap())
}

fn upsilon(a: &GenSec, b: &GenSec, c: &GenSec) -> Func {
    a.dorfman(b).unwrap().pairing(c).unwrap()
}

// ---------------------------------------------------------------------------
// criteria

fn plane_example() -> Outcome {
    let cmds = run_fixture("plane.dk")?;
    let l = LagFrame::new(
        chart(2),
        vec![sec(VecField(vec![x(0), c(0)]), OneForm(vec![c(0), c(-1)])), sec(VecField(vec![c(0), x(0)]), OneForm(vec![c(1), c(0)]))],
    )
    .unwrap();
    let r = LagFrame::new(chart(2), vec![GenSec::from_form(OneForm::basis(2, 0)), GenSec::from_vec(VecField::basis(2, 1))]).unwrap();
    let expected =
        LagFrame::new(chart(2), vec![GenSec::from_form(OneForm::basis(2, 0)), GenSec::from_vec(VecField(vec![c(0), x(0)]))]).unwrap();
    let generic = frames::star(&l, &r).map_err(|e| e.to_string())?;
    ensure!(generic.frame.spans_same(&expected), "generic frame is not ⟨dx1, x1∂2⟩");

    let off = smoothness_probe(Product::Star, &l, &r, &point(&[2, 0])).unwrap();
    let on = smoothness_probe(Product::Star, &l, &r, &point(&[0, 3])).unwrap();
    ensure!(off.matches && !on.matches, "probe verdicts {} / {}", off.matches, on.matches);
    ensure!(on.pointwise_fiber == *LagSubspace::cotangent(2).subspace(), "fiber at (0,3) is not T*M");

    let a = &find(&cmds, "probe-smooth L R star at (2, 0) expect true")?["probes"][0];
    let b = &find(&cmds, "probe-smooth L R star at (0, 3) expect false")?["probes"][0];
    ensure!(a["matches"] == true && b["matches"] == false, "document probes disagree");
    ensure!(strings(&b["pointwise_fiber"]) == ["d(x1)", "d(x2)"], "document fiber at (0,3): {}", b["pointwise_fiber"]);
    Ok("generic ⟨dx1, x1∂2⟩; match at (2,0); T*M at (0,3)".into())
}

fn space_example() -> Outcome {
    let cmds = run_fixture("space.dk")?;
    let r = find(&cmds, "check-dirac R")?;
    ensure!(r["involutive"] == true, "R is not involutive");
    let probes = &find(&cmds, "probe-smooth L R star at (1, 0, 0, 0) (1, 1, 1, 0) expect false")?["probes"];
    let ranks: Vec<_> =
        (0..2).map(|k| (probes[k]["pointwise_stats"]["pr_t_rank"].clone(), probes[k]["pointwise_stats"]["parity"].clone())).collect();
    ensure!(ranks == [(Json::from(1), Json::from("odd")), (Json::from(2), Json::from("even"))], "ranks {ranks:?}");
    Ok("pr_T ranks 1 (odd) and 2 (even); R involutive".into())
}

fn non_concurring_pair() -> Outcome {
    let cmds = run_fixture("pair.dk")?;
    let cc = find(&cmds, "concur pl pr expect false")?;
    ensure!(cc["concur"] == false, "pair concurs");
    ensure!(cc["schouten"] == "@x2^@x3^@x4", "schouten = {}", cc["schouten"]);

    let pl = Bivector::elementary(4, 0, 1, c(1));
    let pr = Bivector::elementary(4, 2, 3, x(0));
    let l = LagFrame::graph_bivector(chart(4), &pl).unwrap();
    let r = LagFrame::graph_bivector(chart(4), &pr).unwrap();
    ensure!(!concur_weak(&l, &r).unwrap().concur, "library reports concurrence");
    let t = pair_torsion_suite(&l, &r).map_err(|e| e.to_string())?;
    ensure!(t.tuples > 0 && t.vanishes_on_generated(), "torsion nonzero on {} tuples", t.nonzero.len());
    let pt = find(&cmds, "pair-torsion pl pr")?;
    ensure!(pt["verdict"] == true, "document torsion verdict {}", pt["verdict"]);
    Ok(format!("no concurrence, schouten ∂2∧∂3∧∂4, torsion 0 on {} tuples", t.tuples))
}

fn r2(i: usize) -> Func {
    &(&x(2 * i) * &x(2 * i)) + &(&x(2 * i + 1) * &x(2 * i + 1))
}

fn p_omega_example() -> Outcome {
    let mut pi = Bivector::zero(4);
    let mut omega = TwoForm::zero(4);
    for i in 0..2 {
        pi = pi.add(&Bivector::elementary(4, 2 * i, 2 * i + 1, r2(i))).unwrap();
        omega = omega.add(&TwoForm::elementary(4, 2 * i, 2 * i + 1, c(-1))).unwrap();
    }
    let a = pi_omega(&pi, &omega).unwrap();
    ensure!(nijenhuis(&a).unwrap().is_zero(), "N(a) ≠ 0");
    ensure!(concomitant_pi(&a, &pi).unwrap().is_zero(), "C(a, π) ≠ 0");
    ensure!(concomitant_omega(&a, &omega).unwrap().is_zero(), "C(a, ω) ≠ 0");
    ensure!(omega_pi_omega(&pi, &omega).unwrap().d().is_zero(), "d(ωπω) ≠ 0");
    let rep = p_omega_suite(&chart(4), &pi, &omega).unwrap();
    ensure!(rep.concur && rep.p_omega && rep.complementary, "suite ({}, {}, {})", rep.concur, rep.p_omega, rep.complementary);
    let r4 = |i: usize| &r2(i) * &r2(i);
    let expected = Bivector::elementary(4, 0, 1, r4(0)).add(&Bivector::elementary(4, 2, 3, r4(1))).unwrap();
    ensure!(bivector_ladder(&a, &pi, 1).unwrap() == expected, "π_1 ≠ Σ r_i⁴ ∂x_i∧∂y_i");

    let cmds = run_fixture("pomega.dk")?;
    ensure!(find(&cmds, "pomega pi om")?["verdict"] == true, "document verdict");
    Ok("N = 0, C = 0, d(ωπω) = 0, suite (true, true, true), ladder exact".into())
}

fn p_omega_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..20 {
        let pi = random_constant_bivector(&mut rng, 4);
        let deg = rng.gen_range(1..=2);
        let alpha = OneForm((0..4).map(|_| random_poly(&mut rng, 4, deg)).collect());
        let rep = p_omega_suite(&chart(4), &pi, &alpha.d()).map_err(|e| e.to_string())?;
        ensure!(rep.agree(), "verdicts ({}, {}, {}) disagree", rep.concur, rep.p_omega, rep.complementary);
        if rep.concur {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("20 pairs agree ({yes} compatible, {no} not)"))
}

fn is_lagrangian_brute(s: &Subspace<Q>) -> bool {
    let es = s.elements();
    s.dim() == s.fiber_dim() && es.iter().all(|a| es.iter().all(|b| pairing(a, b).unwrap().is_zero()))
}

fn law_checks(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use pointwise::{costar, product_flagged, star};
    let n = rng.gen_range(1..=4);
    let (l, r, s) = (random_lagrangian(rng, n), random_lagrangian(rng, n), random_lagrangian(rng, n));
    for kind in [Product::Star, Product::Costar] {
        let lr = product_flagged(kind, &l, &r).unwrap().result;
        ensure!(is_lagrangian_brute(&lr), "{kind:?} not Lagrangian");
        ensure!(lr == product_flagged(kind, &r, &l).unwrap().result, "{kind:?} not commutative");
        let lr = LagSubspace::new(lr).unwrap();
        let rs = LagSubspace::new(product_flagged(kind, &r, &s).unwrap().result).unwrap();
        ensure!(
            product_flagged(kind, &lr, &s).unwrap().result == product_flagged(kind, &l, &rs).unwrap().result,
            "{kind:?} not associative"
        );
    }
    let (t, ct) = (LagSubspace::tangent(n), LagSubspace::cotangent(n));
    ensure!(star(&l, &t).unwrap() == l && star(&l, &ct).unwrap() == ct, "⋆ unit/zero");
    ensure!(costar(&l, &ct).unwrap() == l && costar(&l, &t).unwrap() == t, "⊛ unit/zero");

    let (pl, pr, pt) = (l.pr_t(), r.pr_t(), star(&l, &r).unwrap().pr_t());
    ensure!(pl.contains_span(&pt) && pr.contains_span(&pt), "pr_T(L⋆R) not in both");
    ensure!(pt.dim() == pl.dim() + pr.dim() - pl.sum(&pr).dim(), "pr_T(L⋆R) ≠ pr_T L ∩ pr_T R");

    // the composed relations are dual: pairwise compatibility and full dimension
    let d = diamond(l.subspace(), r.subspace()).unwrap();
    for tr in d.tangent.rows() {
        for cr in d.cotangent.rows() {
            let lhs = (0..n).fold(Q::zero(), |a, i| a + cr[i].clone() * tr[i].clone());
            let rhs = (0..n).fold(Q::zero(), |a, i| a + cr[n + i].clone() * tr[n + i].clone());
            ensure!(lhs == rhs, "relation pair fails ξ(x) = η(y)");
        }
    }
    ensure!(d.tangent.dim() + d.cotangent.dim() == 2 * n, "relations not complementary");

    let m = rng.gen_range(1..=4);
    let f = LinearPointMap::new(Matrix::from_fn(n, m, |_, _| small(rng)));
    let g = LinearPointMap::new(Matrix::from_fn(m, rng.gen_range(1..=4), |_, _| small(rng)));
    let back = f.pullback(&star(&l, &r).unwrap()).unwrap();
    ensure!(back == star(&f.pullback(&l).unwrap(), &f.pullback(&r).unwrap()).unwrap(), "pullback does not respect ⋆");
    let fg = LinearPointMap::new(f.jacobian.mul(&g.jacobian));
    ensure!(fg.pullback(&l).unwrap() == g.pullback(&f.pullback(&l).unwrap()).unwrap(), "(f∘g)^! ≠ g^! f^!");

    for t in [q(2), q(-1), Q::from_ratio(1, 3)] {
        let gauge = Gauge::Rescale(t);
        for kind in [Product::Star, Product::Costar] {
            let a = transform(&LagSubspace::new(product_flagged(kind, &l, &r).unwrap().result).unwrap(), &gauge).unwrap();
            let b = product_flagged(kind, &transform(&l, &gauge).unwrap(), &transform(&r, &gauge).unwrap()).unwrap().result;
            ensure!(*a.subspace() == b, "rescaling does not commute with {kind:?}");
        }
    }
    Ok(())
}

fn algebraic_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = 1000;
    for k in 0..cases {
        law_checks(&mut rng).map_err(|e| format!("case {k}: {e}"))?;
    }
    Ok(format!("{cases} random triples, 0 failures"))
}

fn courant_expansions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 3;
    for round in 0..3 {
        let ls: Vec<LagFrame> = (0..3).map(|_| constant_dirac(&mut rng, n)).collect();
        let k: Vec<usize> = ls.iter().map(|l| l.len()).collect();
        let total: usize = k.iter().sum();
        // sections a_i ∈ Γ(L_i) sharing their cotangent part
        let system = Matrix::from_fn(2 * n, total, |row, col| {
            let (which, idx) = if col < k[0] {
                (0, col)
            } else if col < k[0] + k[1] {
                (1, col - k[0])
            } else {
                (2, col - k[0] - k[1])
            };
            let entry = ls[which].matrix()[(idx, n + row % n)].clone();
            match (row < n, which) {
                (true, 0) | (false, 0) => entry,
                (true, 1) | (false, 2) => -entry,
                _ => Func::zero(),
            }
        });
        let kernel = system.kernel();
        let mut sample = || {
            let mut coef = vec![Func::zero(); total];
            for kv in &kernel {
                let f = random_poly(&mut rng, n, 2);
                for (c, v) in coef.iter_mut().zip(kv) {
                    *c = &*c + &(&f * v);
                }
            }
            [combo(&ls[0], &coef[..k[0]]), combo(&ls[1], &coef[k[0]..k[0] + k[1]]), combo(&ls[2], &coef[k[0] + k[1]..])]
        };
        let (a, b, cc) = (sample(), sample(), sample());
        let join = |p: &[GenSec; 3], idx: &[usize]| {
            let v = idx.iter().fold(VecField::zero(n), |acc, &i| acc.add(&p[i].vec).unwrap());
            sec(v, p[0].covec.clone())
        };
        let all = [0, 1, 2];
        let lhs = upsilon(&join(&a, &all), &join(&b, &all), &join(&cc, &all));
        let singles = all.iter().fold(Func::zero(), |acc, &i| &acc + &upsilon(&a[i], &b[i], &cc[i]));
        let pairs = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .fold(Func::zero(), |acc, &(i, j)| &acc + &upsilon(&join(&a, &[i, j]), &join(&b, &[i, j]), &join(&cc, &[i, j])));
        ensure!(lhs == &(&c(2 - 3) * &singles) + &pairs, "expansion fails in round {round}");
    }

    // Υ_{L⋆R}(a ⋆ b, ...) = Υ_L(a, ...) + Υ_R(b, ...) on matched sections
    for round in 0..4 {
        let (l, r) = (constant_dirac(&mut rng, n), constant_dirac(&mut rng, n));
        let (lm, rm) = (l.matrix(), r.matrix());
        let kl = lm.nrows();
        let kernel =
            Matrix::from_fn(n, kl + rm.nrows(), |i, j| if j < kl { lm[(j, i)].clone() } else { -rm[(j - kl, i)].clone() }).kernel();
        let mut matched = || {
            let mut coef = vec![Func::zero(); kl + r.len()];
            for kv in &kernel {
                let f = random_poly(&mut rng, n, 1);
                for (c, v) in coef.iter_mut().zip(kv) {
                    *c = &*c + &(&f * v);
                }
            }
            (combo(&l, &coef[..kl]), combo(&r, &coef[kl..]))
        };
        let t: Vec<(GenSec, GenSec)> = (0..3).map(|_| matched()).collect();
        let joined: Vec<GenSec> = t.iter().map(|(a, b)| a.add(&b.pr_tstar()).unwrap()).collect();
        let lhs = upsilon(&joined[0], &joined[1], &joined[2]);
        let rhs = &upsilon(&t[0].0, &t[1].0, &t[2].0) + &upsilon(&t[0].1, &t[1].1, &t[2].1);
        ensure!(lhs == rhs, "Υ_(L⋆R) ≠ Υ_L + Υ_R in round {round}");
    }
    Ok("(2−n) expansion on 3 triples; Υ_(L⋆R) = Υ_L + Υ_R on 4 pairs".into())
}

fn j0() -> Matrix<Func> {
    Matrix::from_fn(4, 4, |i, k| match (i, k) {
        (1, 0) | (3, 2) => c(1),
        (0, 1) | (2, 3) => c(-1),
        _ => c(0),
    })
}

/// `e^B J e^{-B}` for the standard complex structure on `ℝ⁴`.
fn b_transformed_complex(b: &TwoForm) -> GcsData {
    let n = 4;
    let base = GcsData::new(Endo(j0()), Bivector::zero(n), TwoForm::zero(n)).unwrap();
    let j = base.j_matrix();
    let bt = b.matrix().transpose();
    let shear = |s: i64| {
        Matrix::from_fn(2 * n, 2 * n, |i, k| {
            if i == k {
                c(1)
            } else if i >= n && k < n {
                &c(s) * &bt[(i - n, k)]
            } else {
                c(0)
            }
        })
    };
    let jb = shear(1).mul(&j).mul(&shear(-1));
    let block = |r0: usize, c0: usize| Matrix::from_fn(n, n, |i, k| jb[(r0 + i, c0 + k)].clone());
    GcsData::new(Endo(block(0, 0)), Bivector::new(block(0, n).transpose()).unwrap(), TwoForm::new(block(n, 0).transpose()).unwrap())
        .unwrap()
}

fn gcs_products() -> Outcome {
    let ch = complex_chart(2);
    let complex =
        GcsData::new(Endo(Matrix::from_rows(2, vec![vec![c(0), c(-1)], vec![c(1), c(0)]])), Bivector::zero(2), TwoForm::zero(2)).unwrap();
    let omega = TwoForm::elementary(2, 0, 1, c(1));
    let pi = Bivector::new(omega.matrix().inverse().unwrap().neg()).unwrap();
    let symplectic = GcsData::new(Endo::zero(2), pi, omega).unwrap();
    for (name, g) in [("complex", complex), ("symplectic", symplectic)] {
        ensure!(g.validate(&ch).unwrap().is_gcs(), "{name} fixture is not a GCS");
        let p = gcs_conj_products(&ch, &g).map_err(|e| e.to_string())?;
        ensure!(p.star_matches && p.costar_matches, "{name}: products differ from Gr(π/2i), Gr(ω/2i)");
        ensure!(p.concur == p.closed && p.closed, "{name}: concur {} closed {}", p.concur, p.closed);
    }

    let ch = complex_chart(4);
    let open_b = d_func(&(&x(0) * &x(2)), 4).wedge(&OneForm::basis(4, 1)).unwrap();
    let closed_b = TwoForm::elementary(4, 2, 3, x(0));
    let mut seen = Vec::new();
    for b in [open_b, closed_b] {
        let g = b_transformed_complex(&b);
        let p = gcs_conj_products(&ch, &g).map_err(|e| e.to_string())?;
        ensure!(p.star_matches && p.costar_matches, "B-transformed products differ");
        ensure!(p.concur == g.omega.d().is_zero(), "concur {} but dω = 0 is {}", p.concur, g.omega.d().is_zero());
        seen.push(p.concur);
    }
    ensure!(seen == [false, true], "expected one non-closed and one closed fixture, got {seen:?}");

    let cmds = run_fixture("gcs.dk")?;
    let verdicts: Vec<_> = ["gcs j p0 w0", "gcs a0 ps ws", "gcs j2 p2 wb", "gcs j2 p2 wc"]
        .iter()
        .map(|k| find(&cmds, k).map(|c| (c["products"]["concur"].clone(), c["products"]["closed"].clone())))
        .collect::<Result<_, _>>()?;
    ensure!(verdicts.iter().all(|(a, b)| a == b), "document concur/closed disagree: {verdicts:?}");
    Ok("⋆ and ⊛ with the conjugate match; concur = closed on 2 + 2 fixtures".into())
}

fn normal_form() -> Outcome {
    let cmds = run_fixture("normalform.dk")?;
    ensure!(find(&cmds, "normal-form L alpha p pn")?["verdict"] == true, "fixture rejected");
    ensure!(find(&cmds, "normal-form L beta p pn expect false")?["verdict"] == false, "perturbed fixture accepted");

    let dx = |i: usize| OneForm::basis(3, i);
    let l = LagFrame::new(
        chart(3),
        vec![
            sec(VecField::basis(3, 2), dx(0)),
            sec(VecField::basis(3, 0).neg(), dx(1).add(&dx(2)).unwrap()),
            sec(VecField::basis(3, 1), dx(0)),
        ],
    )
    .unwrap();
    let p = PolyMap::new(3, vec![x(0), x(1)]).unwrap();
    let pi = Bivector::elementary(2, 0, 1, c(1));
    ensure!(normal_form_verify(&l, &OneForm(vec![x(2), c(0), c(0)]), &p, &pi).unwrap().holds, "library rejects the fixture");
    let perturbed = OneForm(vec![&x(2) + &x(1), c(0), c(0)]);
    ensure!(!normal_form_verify(&l, &perturbed, &p, &pi).unwrap().holds, "library accepts the perturbation");

    // p_!L from the pointwise pushforward, then L ⊛ Gr(fibres) = p^!(p_!L)
    let samples: Vec<Vec<Scalar>> = [[0, 0, 0], [0, 0, 7], [2, -1, 1], [2, -1, -3]].iter().map(|v| point(v)).collect();
    let probe = pushforward_probe(&p, &l, &samples).unwrap();
    ensure!(probe.invariant, "pushforward is not fibrewise constant");
    let down = LagFrame::new(chart(2), vec![GenSec::from_vec(VecField::basis(2, 1)), GenSec::from_form(OneForm::basis(2, 0))]).unwrap();
    for s in &probe.samples {
        ensure!(s.fiber == down.eval_lagrangian(&s.base_point).unwrap(), "p_!L ≠ ⟨∂y, dx⟩");
    }
    let fibres = LagFrame::graph_distribution(chart(3), &[VecField::basis(3, 2)]).unwrap();
    let rep = concur_weak(&l, &fibres).unwrap();
    ensure!(rep.product.frame.spans_same(&pullback(&p, &chart(3), &down).unwrap()), "Libermann identity fails");
    Ok("fixture accepted, perturbation rejected, L ⊛ Gr(F) = p^!(p_!L)".into())
}

fn involutive_structures() -> Outcome {
    let cmds = run_fixture("complex.dk")?;
    let got: Vec<_> = ["involutive dzbar", "involutive e", "involutive lewy expect false"]
        .iter()
        .map(|k| find(&cmds, k).map(|c| (c["concur"].clone(), c["type"].clone())))
        .collect::<Result<_, _>>()?;
    ensure!(got[0] == (Json::from(true), serde_json::json!([1, 0])), "∂/∂z̄: {:?}", got[0]);
    ensure!(got[1] == (Json::from(true), serde_json::json!([0, 1])), "real foliation: {:?}", got[1]);
    ensure!(got[2].0 == false, "Lewy structure concurs");

    let z = &x(0) + &(&i_f() * &x(1));
    let lewy = VecField(vec![c(1), i_f(), &(&c(-2) * &i_f()) * &z]);
    let rep = involutive_structure_suite(&complex_chart(3), &[lewy]).unwrap();
    ensure!(!rep.concur, "library: Lewy structure concurs");
    let rep = involutive_structure_suite(&complex_chart(2), &[VecField(vec![c(1), i_f()])]).unwrap();
    ensure!(rep.concur && (rep.type_n, rep.type_d) == (1, 0), "library: ∂/∂z̄");
    Ok("∂/∂z̄ (1,0) concurs; real foliation (0,1) concurs; Lewy does not".into())
}

fn document_corpus() -> Outcome {
    let dir = fixtures_dir();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "dk"))
        .collect();
    paths.sort();
    ensure!(!paths.is_empty(), "no documents in {}", dir.display());
    for path in &paths {
        let name = path.file_name().unwrap().to_string_lossy();
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let doc = dirackit::parse_document(&text).map_err(|e| format!("{name}:{e}"))?;
        let again = dirackit::parse_document(&dirackit::render_document(&doc)).map_err(|e| format!("{name} (rendered):{e}"))?;
        ensure!(doc == again, "{name}: render does not round-trip");
        let json = dirackit::run_document(&doc).map_err(|e| format!("{name}:{e}"))?.to_json_string();
        let golden = std::fs::read_to_string(path.with_extension("json")).map_err(|e| format!("{name}: golden: {e}"))?;
        ensure!(json == golden, "{name}: report differs from golden");
    }
    Ok(format!("{} documents parse, round-trip and match their goldens", paths.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("planar tangent product", plane_example),
        ("parity split on R^4", space_example),
        ("Dirac pair without concurrence", non_concurring_pair),
        ("compatible Poisson and two-form", p_omega_example),
        ("compatibility verdicts agree", p_omega_equivalence),
        ("pointwise algebraic laws", algebraic_laws),
        ("Courant tensor expansions", courant_expansions),
        ("generalized complex structures", gcs_products),
        ("normal form and pushforward", normal_form),
        ("involutive structures", involutive_structures),
        ("document corpus", document_corpus),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail} [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
