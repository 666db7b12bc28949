//! The double-precision correlators near their light-cone poles, checked
//! against the same expressions evaluated with 192-bit floats.

use astro_float::{BigFloat, Consts, RoundingMode};
use num_complex::Complex64;

use twoatom::correlators::{wightman_xx_cross, wightman_xx_same};
use twoatom::Boundary;

const P: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone)]
struct C {
    re: BigFloat,
    im: BigFloat,
}

fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, P)
}

fn to_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse().unwrap()
}

impl C {
    fn real(x: &BigFloat) -> C {
        C { re: x.clone(), im: big(0.0) }
    }

    fn add(&self, o: &C) -> C {
        C {
            re: self.re.add(&o.re, P, RM),
            im: self.im.add(&o.im, P, RM),
        }
    }

    fn sub(&self, o: &C) -> C {
        C {
            re: self.re.sub(&o.re, P, RM),
            im: self.im.sub(&o.im, P, RM),
        }
    }

    fn mul(&self, o: &C) -> C {
        C {
            re: self.re.mul(&o.re, P, RM).sub(&self.im.mul(&o.im, P, RM), P, RM),
            im: self.re.mul(&o.im, P, RM).add(&self.im.mul(&o.re, P, RM), P, RM),
        }
    }

    fn div(&self, o: &C) -> C {
        let den = o.re.mul(&o.re, P, RM).add(&o.im.mul(&o.im, P, RM), P, RM);
        let num = self.mul(&C {
            re: o.re.clone(),
            im: o.im.neg(),
        });
        C {
            re: num.re.div(&den, P, RM),
            im: num.im.div(&den, P, RM),
        }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

fn prefactor() -> BigFloat {
    let mut cc = Consts::new().unwrap();
    let pi = cc.pi(P, RM);
    big(1.0).div(&pi.mul(&pi, P, RM), P, RM)
}

/// (1/π²)[1/(τ² − R²)² − (t² + Z² − R²)/(τ² − R² − Z²)³], τ = t − iε.
fn cross_reference(t: f64, r: f64, z: Option<f64>, eps: f64) -> Complex64 {
    let tau = C {
        re: big(t),
        im: big(-eps),
    };
    let tau2 = tau.mul(&tau);
    let r2 = C::real(&big(r).mul(&big(r), P, RM));
    let d = tau2.sub(&r2);
    let one = C::real(&big(1.0));
    let mut v = one.div(&d.mul(&d));
    if let Some(z) = z {
        let z2 = C::real(&big(z).mul(&big(z), P, RM));
        let t2 = C::real(&big(t).mul(&big(t), P, RM));
        let num = t2.add(&z2).sub(&r2);
        let den = d.sub(&z2);
        v = v.sub(&num.div(&den.mul(&den).mul(&den)));
    }
    v.mul(&C::real(&prefactor())).to_complex()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn cross_correlator_near_light_cone() {
    for &(r, z) in &[(0.5_f64, Some(1.0)), (2.0, Some(0.5)), (10.0, Some(10.0)), (5.0, None)] {
        let rho = z.map_or(r, |z: f64| r.hypot(z));
        for &eps in &[1e-3, 2.5e-4] {
            for &pole in &[r, rho] {
                for &offset in &[-3.0 * eps, -eps, 0.0, 0.5 * eps, 2.0 * eps, 10.0 * eps] {
                    let t = pole + offset;
                    let b = z.map_or(Boundary::Unbounded, Boundary::Mirror);
                    let got = wightman_xx_cross(t, r, b, eps).unwrap();
                    let want = cross_reference(t, r, z, eps);
                    assert!(rel(got, want) < 1e-9, "R={r} Z={z:?} eps={eps} t={t}: {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn same_point_correlator_near_round_trip() {
    for &z in &[0.05, 0.5, 5.0] {
        let eps = 2.5e-4;
        for &offset in &[-eps, 0.0, eps, 5.0 * eps] {
            let t = z + offset;
            let got = wightman_xx_same(t, Boundary::Mirror(z), eps).unwrap();
            // same point: the cross form at R = 0 reduces to the same-point form
            let want = cross_reference(t, 0.0, Some(z), eps);
            assert!(rel(got, want) < 1e-9, "Z={z} t={t}: {got} vs {want}");
        }
    }
}
