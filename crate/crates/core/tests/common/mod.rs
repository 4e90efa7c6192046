#![allow(dead_code)]

use dirackit_core::pointwise::{transform, Gauge, LagSubspace, Span};
use dirackit_exact::{BigRational, Field, Matrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_int(n)
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

pub fn small(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-2..=2))
}

pub fn random_skew(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Matrix<Q> {
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

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<Q> {
    Matrix::from_fn(rows, cols, |_, _| small(rng))
}

pub fn random_span(rng: &mut ChaCha8Rng, n: usize) -> Span<Q> {
    let k = rng.gen_range(0..=n);
    let rows = (0..k).map(|_| (0..n).map(|_| small(rng)).collect()).collect();
    Span::new(n, rows).unwrap()
}

/// `ℛ_ω ℛ_π (F ⊕ F°)` with random ingredients; every Lagrangian fiber has this shape.
pub fn random_lagrangian(rng: &mut ChaCha8Rng, n: usize) -> LagSubspace<Q> {
    let f = random_span(rng, n);
    let mut l = LagSubspace::graph_distribution(&f);
    if rng.gen_bool(0.7) {
        l = transform(&l, &Gauge::Bivector(random_skew(rng, n, 0.6))).unwrap();
    }
    if rng.gen_bool(0.5) {
        l = transform(&l, &Gauge::TwoForm(random_skew(rng, n, 0.5))).unwrap();
    }
    l
}

pub mod sym {
    use dirackit_core::calculus::{Bivector, GenSec, OneForm, VecField};
    use dirackit_exact::{Field, Func, Monomial, Poly, Scalar};
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    pub fn x(i: usize) -> Func {
        Func::var(i)
    }

    pub fn c(n: i64) -> Func {
        Func::from_int(n)
    }

    pub fn cr(n: i64, d: i64) -> Func {
        Func::constant(Scalar::from_ratio(n, d))
    }

    pub fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    pub fn point(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&a| s(a)).collect()
    }

    /// Polynomial with up to four terms of total degree at most `deg`.
    pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> Func {
        let terms = (0..rng.gen_range(0..=4)).map(|_| {
            let mut e = vec![0u32; n];
            let mut left = rng.gen_range(0..=deg);
            while left > 0 {
                e[rng.gen_range(0..n)] += 1;
                left -= 1;
            }
            (Monomial::new(e), Scalar::from_int(rng.gen_range(-3..=3)))
        });
        Func::from_poly(Poly::from_terms(terms))
    }

    pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> VecField {
        VecField((0..n).map(|_| random_poly(rng, n, deg)).collect())
    }

    pub fn random_form(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> OneForm {
        OneForm((0..n).map(|_| random_poly(rng, n, deg)).collect())
    }

    pub fn random_sec(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> GenSec {
        GenSec::new(random_vec(rng, n, deg), random_form(rng, n, deg)).unwrap()
    }

    pub fn random_bivector(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> Bivector {
        let mut b = Bivector::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.6) {
                    b = b.add(&Bivector::elementary(n, i, j, random_poly(rng, n, deg))).unwrap();
                }
            }
        }
        b
    }
}

pub mod fixtures {
    use super::sym::*;
    use dirackit_core::calculus::{Bivector, Chart, GenSec, OneForm, VecField};
    use dirackit_core::frames::LagFrame;
    use dirackit_exact::Func;
    use num_traits::Zero;

    pub fn sec(v: Vec<Func>, f: Vec<Func>) -> GenSec {
        GenSec::new(VecField(v), OneForm(f)).unwrap()
    }

    pub fn chart(n: usize) -> Chart {
        Chart::standard(n)
    }

    /// `L = ⟨x1∂1 − dx2, x1∂2 + dx1⟩`, `R = ⟨dx1, ∂2⟩` on the plane.
    pub fn plane_pair() -> (LagFrame, LagFrame) {
        let z = Func::zero;
        let l = LagFrame::new(chart(2), vec![sec(vec![x(0), z()], vec![z(), c(-1)]), sec(vec![z(), x(0)], vec![c(1), z()])]).unwrap();
        let r = LagFrame::new(chart(2), vec![GenSec::from_form(OneForm::basis(2, 0)), GenSec::from_vec(VecField::basis(2, 1))]).unwrap();
        (l, r)
    }

    pub fn v_field(i: usize) -> VecField {
        let mut c = vec![Func::zero(); 4];
        c[i] = c_one();
        c[2] = x(i);
        c[3] = x(i);
        VecField(c)
    }

    fn c_one() -> Func {
        c(1)
    }

    pub fn pi_l() -> Bivector {
        Bivector::elementary(4, 0, 1, c(1))
    }

    pub fn pi_r() -> Bivector {
        Bivector::elementary(4, 2, 3, x(0))
    }

    /// `L = Gr(∂1∧∂2 + x3∂3∧∂4)`, `R = Gr(span{v1, v2})` on `ℝ⁴`.
    pub fn space_pair() -> (LagFrame, LagFrame) {
        let pi = pi_l().add(&Bivector::elementary(4, 2, 3, x(2))).unwrap();
        let l = LagFrame::graph_bivector(chart(4), &pi).unwrap();
        let r = LagFrame::graph_distribution(chart(4), &[v_field(0), v_field(1)]).unwrap();
        (l, r)
    }
}
