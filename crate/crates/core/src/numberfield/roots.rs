//! Certified isolation of the complex roots of a squarefree monic integer
//! polynomial.
//!
//! Approximations come from Aberth iteration in `f64` followed by Newton
//! steps at increasing dyadic precision. Each approximation `z_i` is then
//! enclosed in the Weierstrass disk of radius `d |f(z_i)| / |prod_{j != i} (z_i - z_j)|`;
//! the union of these disks contains every root and a disk disjoint from the
//! others contains exactly one.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::ball::{Ball, BallComplex, Dyadic};
use crate::error::{Error, Result};

const MAX_WORKING_PREC: u32 = 1 << 16;

#[derive(Clone, Debug)]
pub(crate) struct RootEnclosure {
    pub ball: BallComplex,
    pub real: bool,
}

fn horner_f64(f: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in f.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth(f: &[BigInt]) -> Result<Vec<Complex64>> {
    let d = f.len() - 1;
    let fc: Vec<f64> = f
        .iter()
        .map(|c| c.to_f64().filter(|x| x.is_finite()))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Overflow("polynomial coefficients exceed f64 range".into()))?;
    let lead = fc[d];
    let bound = 1.0 + fc[..d].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, a)
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = horner_f64(&fc, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = w / (1.0 - w * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    Ok(z)
}

fn dyadic_of_f64(x: f64) -> Dyadic {
    let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    Dyadic::from_rational_trunc(&q, 64).0
}

fn point(re: &Dyadic, im: &Dyadic, prec: u32) -> BallComplex {
    BallComplex::new(
        Ball::with_radius(re.clone(), Dyadic::zero(), prec),
        Ball::with_radius(im.clone(), Dyadic::zero(), prec),
    )
}

fn eval(f: &[BigInt], z: &BallComplex) -> (BallComplex, BallComplex) {
    let mut p = BallComplex::zero();
    let mut dp = BallComplex::zero();
    for c in f.iter().rev() {
        dp = dp * z.clone() + p.clone();
        p = p * z.clone() + BallComplex::real(Ball::from_int(c));
    }
    (p, dp)
}

fn newton_step(f: &[BigInt], z: &(Dyadic, Dyadic), prec: u32) -> (Dyadic, Dyadic) {
    let zb = point(&z.0, &z.1, prec);
    let (p, dp) = eval(f, &zb);
    match p.div(&dp, prec) {
        Ok(w) => {
            let n = zb - w;
            (n.re.mid().truncate(prec).0, n.im.mid().truncate(prec).0)
        }
        Err(_) => z.clone(),
    }
}

/// Weierstrass radii (upper bounds) at the given approximations.
fn weierstrass_radii(f: &[BigInt], zs: &[(Dyadic, Dyadic)], prec: u32) -> Vec<Option<Dyadic>> {
    let d = zs.len() as i64;
    let pts: Vec<BallComplex> = zs.iter().map(|z| point(&z.0, &z.1, prec)).collect();
    (0..zs.len())
        .map(|i| {
            let (p, _) = eval(f, &pts[i]);
            let mut denom = Dyadic::one();
            for j in 0..zs.len() {
                if j != i {
                    denom = denom.mul(&(pts[i].clone() - pts[j].clone()).abs_lower()).round_down(40);
                }
            }
            if denom.is_zero() {
                return None;
            }
            Some(p.abs_upper().mul(&Dyadic::from_i64(d)).div_up(&denom, 40))
        })
        .collect()
}

fn dist_lower(a: &(Dyadic, Dyadic), b: &(Dyadic, Dyadic)) -> Dyadic {
    BallComplex::new(Ball::exact(a.0.sub(&b.0)), Ball::exact(a.1.sub(&b.1))).abs_lower()
}

struct Certified {
    zs: Vec<(Dyadic, Dyadic)>,
    radii: Vec<Dyadic>,
    real: Vec<bool>,
}

fn certify(f: &[BigInt], zs: &[(Dyadic, Dyadic)], prec: u32) -> Option<Certified> {
    let radii: Vec<Dyadic> = weierstrass_radii(f, zs, prec).into_iter().collect::<Option<_>>()?;
    let n = zs.len();
    for i in 0..n {
        for j in i + 1..n {
            if dist_lower(&zs[i], &zs[j]) <= radii[i].add(&radii[j]) {
                return None;
            }
        }
    }
    // a disk recentred on the real axis and still disjoint from the others
    // is its own conjugate, so its single root is real
    let real = (0..n)
        .map(|i| {
            let r = radii[i].add(&zs[i].1.abs());
            let c = (zs[i].0.clone(), Dyadic::zero());
            (0..n).all(|j| j == i || dist_lower(&c, &zs[j]) > r.add(&radii[j]))
        })
        .collect();
    Some(Certified {
        zs: zs.to_vec(),
        radii,
        real,
    })
}

fn order(a: &RootEnclosure, b: &RootEnclosure) -> Ordering {
    let (ar, ai) = a.ball.to_f64_pair();
    let (br, bi) = b.ball.to_f64_pair();
    match (a.real, b.real) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => br.total_cmp(&ar).then(bi.total_cmp(&ai)),
    }
}

/// Enclosures of all roots of the monic squarefree `f` (constant term
/// first), each of radius at most `2^-prec * max(1, |root|)`.
///
/// Real roots come first in decreasing order, then the non-real roots by
/// decreasing real part, the one with positive imaginary part first.
pub(crate) fn isolate_roots(f: &[BigInt], prec: u32) -> Result<Vec<RootEnclosure>> {
    let d = f.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| Error::Invalid("constant polynomial has no roots".into()))?;
    if d == 1 {
        let q = BigRational::new(-f[0].clone(), f[1].clone());
        return Ok(vec![RootEnclosure {
            ball: BallComplex::from_rational(&q, prec.max(2)),
            real: true,
        }]);
    }
    let mut zs: Vec<(Dyadic, Dyadic)> = aberth(f)?
        .into_iter()
        .map(|z| (dyadic_of_f64(z.re), dyadic_of_f64(z.im)))
        .collect();
    let mut wp = 64u32;
    let target = prec + 16;
    loop {
        let mut p = 64u32;
        loop {
            p = (2 * p).min(wp);
            zs = zs.iter().map(|z| newton_step(f, z, p)).collect();
            if p == wp {
                break;
            }
        }
        for _ in 0..2 {
            zs = zs.iter().map(|z| newton_step(f, z, wp)).collect();
        }
        if let Some(c) = certify(f, &zs, wp) {
            // snap real roots onto the axis and re-certify with real Newton steps
            let snapped: Vec<(Dyadic, Dyadic)> = c
                .zs
                .iter()
                .zip(&c.real)
                .map(|(z, &r)| {
                    if r {
                        let mut x = (z.0.clone(), Dyadic::zero());
                        x = newton_step(f, &x, wp);
                        (x.0, Dyadic::zero())
                    } else {
                        z.clone()
                    }
                })
                .collect();
            if let Some(c2) = certify(f, &snapped, wp) {
                let ok = (0..d).all(|i| {
                    let mag = Dyadic::max(&Dyadic::one(), &c2.zs[i].0.abs().add(&c2.zs[i].1.abs()));
                    let rad = if c2.real[i] {
                        c2.radii[i].add(&c2.zs[i].1.abs())
                    } else {
                        c2.radii[i].clone()
                    };
                    rad <= mag.mul(&Dyadic::pow2(-(prec as i64)))
                });
                if ok && c2.real.iter().zip(&c.real).all(|(a, b)| a == b) {
                    let mut out: Vec<RootEnclosure> = (0..d)
                        .map(|i| {
                            let (re, im) = &c2.zs[i];
                            let r = &c2.radii[i];
                            if c2.real[i] {
                                RootEnclosure {
                                    ball: BallComplex::real(Ball::with_radius(re.clone(), r.add(&im.abs()), wp)),
                                    real: true,
                                }
                            } else {
                                RootEnclosure {
                                    ball: BallComplex::new(
                                        Ball::with_radius(re.clone(), r.clone(), wp),
                                        Ball::with_radius(im.clone(), r.clone(), wp),
                                    ),
                                    real: false,
                                }
                            }
                        })
                        .collect();
                    out.sort_by(order);
                    return Ok(out);
                }
            }
        }
        if wp >= MAX_WORKING_PREC {
            return Err(Error::Precision("root isolation did not certify".into()));
        }
        wp = (wp * 2).max(target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sqrt_two() {
        let r = isolate_roots(&ints(&[-2, 0, 1]), 100).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].real && r[1].real);
        let sq = r[0].ball.re.sqr();
        assert!(sq.contains_rational(&rat(2, 1)));
        assert!((r[0].ball.re.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!((r[1].ball.re.to_f64() + 2f64.sqrt()).abs() < 1e-15);
        assert!(*r[0].ball.re.rad() <= Dyadic::pow2(-99));
    }

    #[test]
    fn golden_ratio_order() {
        let r = isolate_roots(&ints(&[-1, -1, 1]), 64).unwrap();
        assert!((r[0].ball.re.to_f64() - 1.618033988749895).abs() < 1e-12);
        assert!((r[1].ball.re.to_f64() + 0.618033988749895).abs() < 1e-12);
    }

    #[test]
    fn complex_pair_and_real_root() {
        // x^3 - 2: one real root, a conjugate pair
        let r = isolate_roots(&ints(&[-2, 0, 0, 1]), 80).unwrap();
        assert!(r[0].real && !r[1].real && !r[2].real);
        assert!(r[1].ball.im.to_f64() > 0.0);
        for e in &r {
            let (p, _) = eval(&ints(&[-2, 0, 0, 1]), &e.ball);
            assert!(p.contains_zero());
        }
    }

    #[test]
    fn cyclotomic_roots_all_complex() {
        let r = isolate_roots(&ints(&[1, 1, 1, 1, 1]), 64).unwrap();
        assert!(r.iter().all(|e| !e.real));
    }
}
