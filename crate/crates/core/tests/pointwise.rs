mod common;

use common::*;
use dirackit_core::pointwise::{
    costar, decompose, diamond, dual_relation, pairing, product_flagged, star, transform, FiberElement, Gauge, LagSubspace, LinearPointMap,
    Parity, Product, Span, Subspace,
};
use dirackit_exact::Matrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn elem(vec: &[i64], covec: &[i64]) -> FiberElement<Q> {
    FiberElement::new(vec.iter().map(|&x| q(x)).collect(), covec.iter().map(|&x| q(x)).collect()).unwrap()
}

fn lag(n: usize, elems: &[FiberElement<Q>]) -> LagSubspace<Q> {
    LagSubspace::new(Subspace::from_elements(n, elems).unwrap()).unwrap()
}

fn skew(n: usize, entries: &[(usize, usize, Q)]) -> Matrix<Q> {
    let mut m = Matrix::zeros(n, n);
    for (i, j, v) in entries {
        m[(*i, *j)] = v.clone();
        m[(*j, *i)] = -v.clone();
    }
    m
}

fn span(n: usize, rows: &[&[i64]]) -> Span<Q> {
    Span::new(n, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
}

/// Isotropy checked element by element and dimension n.
fn is_lagrangian_brute(s: &Subspace<Q>) -> bool {
    let es = s.elements();
    s.dim() == s.fiber_dim() && es.iter().all(|a| es.iter().all(|b| pairing(a, b).unwrap().is_zero()))
}

// --- pairing and orthogonals ------------------------------------------------------

#[test]
fn pairing_values() {
    assert_eq!(pairing(&elem(&[1], &[0]), &elem(&[0], &[1])).unwrap(), q(1));
    assert_eq!(pairing(&elem(&[1], &[1]), &elem(&[1], &[1])).unwrap(), q(2));
    // the planar frame x1 ∂1 − dx2, x1 ∂2 + dx1 at x1 = 1
    assert!(pairing(&elem(&[1, 0], &[0, -1]), &elem(&[0, 1], &[1, 0])).unwrap().is_zero());
    assert!(pairing(&elem(&[1], &[0]), &elem(&[1, 0], &[0, 0])).is_err());
}

#[test]
fn orthogonals() {
    let t = LagSubspace::<Q>::tangent(2);
    assert_eq!(t.orthogonal(), *t.subspace());
    let line = Subspace::from_elements(2, &[elem(&[1, 0], &[0, 0])]).unwrap();
    let expected = Subspace::from_elements(2, &[elem(&[1, 0], &[0, 0]), elem(&[0, 1], &[0, 0]), elem(&[0, 0], &[0, 1])]).unwrap();
    assert_eq!(line.orthogonal(), expected);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let rows: Vec<Vec<Q>> = (0..3).map(|_| (0..6).map(|_| small(&mut rng)).collect()).collect();
        let w = Subspace::new(3, rows).unwrap();
        let o = w.orthogonal();
        assert_eq!(w.dim() + o.dim(), 6);
        assert_eq!(o.orthogonal(), w);
        // brute force: every basis pair pairs to zero
        for a in w.elements() {
            for b in o.elements() {
                assert!(pairing(&a, &b).unwrap().is_zero());
            }
        }
    }
}

// --- products ------------------------------------------------------------------------

#[test]
fn star_worked_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let l = random_lagrangian(&mut rng, 3);
    assert_eq!(star(&l, &LagSubspace::tangent(3)).unwrap(), l);

    let w1 = skew(2, &[(0, 1, q(3))]);
    let w2 = skew(2, &[(0, 1, qr(-1, 2))]);
    let g = star(&LagSubspace::graph_two_form(&w1).unwrap(), &LagSubspace::graph_two_form(&w2).unwrap()).unwrap();
    assert_eq!(g, LagSubspace::graph_two_form(&w1.add(&w2)).unwrap());

    let e = LagSubspace::graph_distribution(&span(3, &[&[1, 0, 0]]));
    let f = LagSubspace::graph_distribution(&span(3, &[&[1, 0, 0], &[0, 1, 0]]));
    let expected = lag(3, &[elem(&[1, 0, 0], &[0, 0, 0]), elem(&[0, 0, 0], &[0, 1, 0]), elem(&[0, 0, 0], &[0, 0, 1])]);
    assert_eq!(star(&e, &f).unwrap(), expected);
}

#[test]
fn costar_worked_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let l = random_lagrangian(&mut rng, 3);
    assert_eq!(costar(&l, &LagSubspace::cotangent(3)).unwrap(), l);

    let p1 = skew(2, &[(0, 1, q(2))]);
    let p2 = skew(2, &[(0, 1, q(5))]);
    let g = costar(&LagSubspace::graph_bivector(&p1).unwrap(), &LagSubspace::graph_bivector(&p2).unwrap()).unwrap();
    assert_eq!(g, LagSubspace::graph_bivector(&p1.add(&p2)).unwrap());

    let e = LagSubspace::graph_distribution(&span(3, &[&[1, 0, 0]]));
    let f = LagSubspace::graph_distribution(&span(3, &[&[1, 0, 0], &[0, 1, 0]]));
    let expected = lag(3, &[elem(&[1, 0, 0], &[0, 0, 0]), elem(&[0, 1, 0], &[0, 0, 0]), elem(&[0, 0, 0], &[0, 0, 1])]);
    assert_eq!(costar(&e, &f).unwrap(), expected);
}

#[test]
fn non_lagrangian_inputs_are_flagged() {
    let w = Subspace::from_elements(2, &[elem(&[1, 0], &[1, 0])]).unwrap();
    let t = LagSubspace::<Q>::tangent(2);
    let out = product_flagged(Product::Star, &w, &t).unwrap();
    assert!(!out.lagrangian_inputs);
    assert_eq!(out.result, w);
    assert!(LagSubspace::new(w).is_err());
}

// --- gauge actions ------------------------------------------------------------------------

#[test]
fn gauge_worked_values() {
    let w = skew(3, &[(0, 1, q(1)), (1, 2, q(-4))]);
    let tm = LagSubspace::<Q>::tangent(3);
    assert_eq!(transform(&tm, &Gauge::TwoForm(w.clone())).unwrap(), LagSubspace::graph_two_form(&w).unwrap());

    let p = skew(3, &[(0, 2, q(7))]);
    let gp = LagSubspace::graph_bivector(&p).unwrap();
    assert_eq!(transform(&gp, &Gauge::Rescale(q(-1))).unwrap(), LagSubspace::graph_bivector(&p.neg()).unwrap());

    // pr_T(L) = span{∂1} forces L = span{∂1, dx2}
    let l = lag(2, &[elem(&[1, 0], &[0, 0]), elem(&[0, 0], &[0, 1])]);
    let out = star(&l, &transform(&l, &Gauge::Rescale(q(-1))).unwrap()).unwrap();
    assert_eq!(out, lag(2, &[elem(&[1, 0], &[0, 0]), elem(&[0, 0], &[0, 1])]));
}

#[test]
fn gauge_actions_are_products_with_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let l = random_lagrangian(&mut rng, n);
        let w = random_skew(&mut rng, n, 0.7);
        let p = random_skew(&mut rng, n, 0.7);
        assert_eq!(transform(&l, &Gauge::TwoForm(w.clone())).unwrap(), star(&LagSubspace::graph_two_form(&w).unwrap(), &l).unwrap());
        assert_eq!(transform(&l, &Gauge::Bivector(p.clone())).unwrap(), costar(&LagSubspace::graph_bivector(&p).unwrap(), &l).unwrap());
    }
}

#[test]
fn non_skew_gauge_rejected() {
    let mut m = Matrix::zeros(2, 2);
    m[(0, 1)] = q(1);
    assert!(transform(&LagSubspace::<Q>::tangent(2), &Gauge::TwoForm(m)).is_err());
}

// --- maps -------------------------------------------------------------------------------------

#[test]
fn transport_worked_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let w = random_lagrangian(&mut rng, 3);
    let id = LinearPointMap::identity(3);
    assert_eq!(id.pullback(&w).unwrap(), w);
    assert_eq!(id.pushforward(&w).unwrap(), w);

    let proj = LinearPointMap::new(Matrix::from_rows(2, vec![vec![q(1), q(0)]]));
    assert_eq!(proj.pushforward(&LagSubspace::tangent(2)).unwrap(), LagSubspace::tangent(1));

    // K^3 -> K^2, (x1, x2, x3) -> (x1, x2), pulling back Gr(∂1∧∂2)
    let p = LinearPointMap::new(Matrix::from_rows(3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]));
    let g = LagSubspace::graph_bivector(&skew(2, &[(0, 1, q(1))])).unwrap();
    let expected = lag(3, &[elem(&[0, 0, 1], &[0, 0, 0]), elem(&[1, 0, 0], &[0, -1, 0]), elem(&[0, 1, 0], &[1, 0, 0])]);
    assert_eq!(p.pullback(&g).unwrap(), expected);
}

/// Membership oracle: `u + ξ` lies in `f^!(W)` iff some `η` with `f^*η = ξ`
/// has `f_*u + η ∈ W`. With a particular `η0`, that is `(f_*u, η0) ∈ W + 0 × ker f^*`.
#[test]
fn pullback_elements_are_related_to_target_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (m, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = LinearPointMap::new(random_matrix(&mut rng, m, n));
        let w = random_lagrangian(&mut rng, m);
        let back = f.pullback(&w).unwrap();
        assert!(is_lagrangian_brute(&back));
        let at = f.jacobian.transpose();
        let mut rows: Vec<Vec<Q>> = w.basis().to_rows();
        rows.extend(at.kernel().into_iter().map(|z| vec![Q::zero(); m].into_iter().chain(z).collect()));
        let widened = Span::new(2 * m, rows).unwrap();
        for a in back.elements() {
            let column: Vec<Vec<Q>> = a.covec.iter().map(|x| vec![x.clone()]).collect();
            let augmented = at.hstack(&Matrix::from_rows(1, column));
            let eta0: Vec<Q> = if a.covec.iter().all(|x| x.is_zero()) {
                vec![Q::zero(); m]
            } else {
                let k = augmented.kernel().into_iter().find(|k| !k[m].is_zero()).expect("ξ lies in the image of f^*");
                let scale = -k[m].clone();
                k[..m].iter().map(|x| x.clone() / scale.clone()).collect()
            };
            let target: Vec<Q> = f.jacobian.mul_vec(&a.vec).into_iter().chain(eta0).collect();
            assert!(widened.contains(&target));
        }
    }
}

// --- relations ---------------------------------------------------------------------------------

#[test]
fn diamond_worked_values() {
    let t = LagSubspace::<Q>::tangent(2);
    let d = diamond(&t, &t).unwrap();
    assert_eq!(d.tangent.dim(), 4);
    assert_eq!(d.cotangent.dim(), 0);
    assert!(d.duality_holds);

    // ∂1∧∂2 and x1 ∂3∧∂4 at x1 = 1
    let pl = skew(4, &[(0, 1, q(1))]);
    let pr = skew(4, &[(2, 3, q(1))]);
    let l = LagSubspace::graph_bivector(&pl).unwrap();
    let r = LagSubspace::graph_bivector(&pr).unwrap();
    let d = diamond(&l, &r).unwrap();
    assert!(d.duality_holds);
    // {(ξ, η) : π_L♯ξ = π_R♯η} is the kernel of [π_L^T | −π_R^T]
    let system = pl.transpose().hstack(&pr.transpose().neg());
    assert_eq!(d.cotangent, Span::new(8, system.kernel()).unwrap());
}

#[test]
fn diamond_duality_against_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let l = random_lagrangian(&mut rng, n);
        let r = random_lagrangian(&mut rng, n);
        let d = diamond(&l, &r).unwrap();
        assert!(d.duality_holds);
        // inclusion: ξ(x) = η(y) on all basis pairs, plus the dimension count
        for t in d.tangent.rows() {
            for c in d.cotangent.rows() {
                let lhs: Q = (0..n).map(|i| c[i].clone() * t[i].clone()).fold(Q::zero(), |a, b| a + b);
                let rhs: Q = (0..n).map(|i| c[n + i].clone() * t[n + i].clone()).fold(Q::zero(), |a, b| a + b);
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(d.tangent.dim() + d.cotangent.dim(), 2 * n);
        assert_eq!(dual_relation(&d.tangent), d.cotangent);
    }
}

// --- fiber statistics ---------------------------------------------------------------------------

/// The R^4 pair: L = Gr(∂1∧∂2 + x3 ∂3∧∂4) and R the foliation by fibres of
/// (x3 − f, x4 − f), f = (x1² + x2²)/2, evaluated at a point.
fn r4_pair(x: [i64; 4]) -> (LagSubspace<Q>, LagSubspace<Q>) {
    let pi = skew(4, &[(0, 1, q(1)), (2, 3, q(x[2]))]);
    let l = LagSubspace::graph_bivector(&pi).unwrap();
    let v1 = [1, 0, x[0], x[0]];
    let v2 = [0, 1, x[1], x[1]];
    let r = LagSubspace::graph_distribution(&span(4, &[&v1, &v2]));
    (l, r)
}

#[test]
fn parity_split_across_the_singular_set() {
    assert_eq!(LagSubspace::<Q>::tangent(4).stats().pr_t_rank, 4);
    assert_eq!(LagSubspace::<Q>::tangent(4).stats().parity, Parity::Even);

    let (l, r) = r4_pair([1, 0, 0, 0]);
    let s = star(&l, &r).unwrap().stats();
    assert_eq!((s.pr_t_rank, s.parity), (1, Parity::Odd));

    let (l, r) = r4_pair([1, 1, 1, 0]);
    let s = star(&l, &r).unwrap().stats();
    assert_eq!((s.pr_t_rank, s.parity), (2, Parity::Even));
}

#[test]
fn r4_fibers_match_the_case_split() {
    // on A: ⟨x2 v1 − x1 v2, df, dx3, dx4⟩ at (1, 0, 0, 0)
    let (l, r) = r4_pair([1, 0, 0, 0]);
    let on_a = lag(
        4,
        &[
            elem(&[0, -1, 0, 0], &[0, 0, 0, 0]),
            elem(&[0, 0, 0, 0], &[1, 0, 0, 0]),
            elem(&[0, 0, 0, 0], &[0, 0, 1, 0]),
            elem(&[0, 0, 0, 0], &[0, 0, 0, 1]),
        ],
    );
    assert_eq!(star(&l, &r).unwrap(), on_a);
    // off A: ⟨v1 − dx2, v2 + dx1, dx3 − df, dx4 − df⟩ at (1, 1, 1, 0)
    let (l, r) = r4_pair([1, 1, 1, 0]);
    let off_a = lag(
        4,
        &[
            elem(&[1, 0, 1, 1], &[0, -1, 0, 0]),
            elem(&[0, 1, 1, 1], &[1, 0, 0, 0]),
            elem(&[0, 0, 0, 0], &[-1, -1, 1, 0]),
            elem(&[0, 0, 0, 0], &[-1, -1, 0, 1]),
        ],
    );
    assert_eq!(star(&l, &r).unwrap(), off_a);
}

// --- decomposition ------------------------------------------------------------------------------

#[test]
fn every_fiber_decomposes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let l = random_lagrangian(&mut rng, n);
        let (pi, f) = decompose(&l);
        assert_eq!(f, l.pr_tstar().annihilator());
        let rebuilt = costar(&LagSubspace::graph_bivector(&pi).unwrap(), &LagSubspace::graph_distribution(&f)).unwrap();
        assert_eq!(rebuilt, l);
    }
}

// --- laws -------------------------------------------------------------------------------------------

#[test]
fn algebraic_laws_on_random_fibers() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let n = rng.gen_range(1..=4);
        let (l, r, s) = (random_lagrangian(&mut rng, n), random_lagrangian(&mut rng, n), random_lagrangian(&mut rng, n));
        for kind in [Product::Star, Product::Costar] {
            let lr = product_flagged(kind, &l, &r).unwrap().result;
            assert!(is_lagrangian_brute(&lr));
            assert_eq!(lr, product_flagged(kind, &r, &l).unwrap().result);
            let lr = LagSubspace::new(lr).unwrap();
            let rs = LagSubspace::new(product_flagged(kind, &r, &s).unwrap().result).unwrap();
            assert_eq!(product_flagged(kind, &lr, &s).unwrap().result, product_flagged(kind, &l, &rs).unwrap().result);
        }
        let t = LagSubspace::tangent(n);
        let c = LagSubspace::cotangent(n);
        assert_eq!(star(&l, &t).unwrap(), l);
        assert_eq!(star(&l, &c).unwrap(), c);
        assert_eq!(costar(&l, &c).unwrap(), l);
        assert_eq!(costar(&l, &t).unwrap(), t);

        // pr_T(L ⋆ R) = pr_T L ∩ pr_T R, checked through containment and dimension
        let lr = star(&l, &r).unwrap();
        let (pl, pr) = (l.pr_t(), r.pr_t());
        let pt = lr.pr_t();
        assert!(pl.contains_span(&pt) && pr.contains_span(&pt));
        assert_eq!(pt.dim(), pl.dim() + pr.dim() - pl.sum(&pr).dim());
        let lc = costar(&l, &r).unwrap();
        let (cl, cr) = (l.pr_tstar(), r.pr_tstar());
        assert!(cl.contains_span(&lc.pr_tstar()) && cr.contains_span(&lc.pr_tstar()));
        assert_eq!(lc.pr_tstar().dim(), cl.dim() + cr.dim() - cl.sum(&cr).dim());
    }
}

/// The tangent product equals the pullback of `L × R` along the diagonal.
#[test]
fn star_is_diagonal_pullback() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let l = random_lagrangian(&mut rng, n);
        let r = random_lagrangian(&mut rng, n);
        let mut rows = Vec::new();
        for a in l.elements() {
            let mut v = a.vec.clone();
            v.extend(vec![Q::zero(); n]);
            let mut c = a.covec.clone();
            c.extend(vec![Q::zero(); n]);
            rows.push(v.into_iter().chain(c).collect());
        }
        for b in r.elements() {
            let mut v = vec![Q::zero(); n];
            v.extend(b.vec.clone());
            let mut c = vec![Q::zero(); n];
            c.extend(b.covec.clone());
            rows.push(v.into_iter().chain(c).collect());
        }
        let product_space = LagSubspace::new(Subspace::new(2 * n, rows).unwrap()).unwrap();
        let diag = LinearPointMap::new(Matrix::identity(n).vstack(&Matrix::identity(n)));
        assert_eq!(diag.pullback(&product_space).unwrap(), star(&l, &r).unwrap());
    }
}

#[test]
fn pullback_functoriality_and_rescaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..200 {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let f = LinearPointMap::new(random_matrix(&mut rng, m, n));
        let l = random_lagrangian(&mut rng, m);
        let r = random_lagrangian(&mut rng, m);
        let lhs = f.pullback(&star(&l, &r).unwrap()).unwrap();
        let rhs = star(&f.pullback(&l).unwrap(), &f.pullback(&r).unwrap()).unwrap();
        assert_eq!(lhs, rhs);

        for t in [q(2), q(-1), qr(1, 3)] {
            let g = Gauge::Rescale(t);
            for kind in [Product::Star, Product::Costar] {
                let a = transform(&LagSubspace::new(product_flagged(kind, &l, &r).unwrap().result).unwrap(), &g).unwrap();
                let b = product_flagged(kind, &transform(&l, &g).unwrap(), &transform(&r, &g).unwrap()).unwrap().result;
                assert_eq!(*a.subspace(), b);
            }
        }
    }
}

#[test]
fn transverse_pairs_give_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut transverse_seen = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=4);
        let l = random_lagrangian(&mut rng, n);
        let r = random_lagrangian(&mut rng, n);
        let flipped = transform(&r, &Gauge::Rescale(q(-1))).unwrap();
        let s = star(&l, &flipped).unwrap();
        let c = costar(&l, &flipped).unwrap();
        let meet = l.intersection(&r).unwrap();
        if meet.dim() == 0 {
            transverse_seen += 1;
            assert_eq!(s.pr_tstar().dim(), n);
            assert_eq!(c.pr_t().dim(), n);
        }
        if s.pr_tstar().dim() == n && c.pr_t().dim() == n {
            assert_eq!(meet.dim(), 0);
        }
    }
    assert!(transverse_seen > 20);
}
