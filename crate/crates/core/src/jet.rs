//! Truncated derivative jets: a value together with its first few
//! derivatives, propagated exactly through arithmetic by the Leibniz and
//! Faà di Bruno rules. Used to differentiate compositions (normalized
//! directors, the striction curve) without finite differencing.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Vector3;

/// Highest derivative order carried by a [`Jet`].
pub const MAX_ORDER: usize = 4;

const BINOM: [[f64; MAX_ORDER + 1]; MAX_ORDER + 1] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

/// Derivatives `d[0..=order]` of a scalar function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    d: [f64; MAX_ORDER + 1],
    order: usize,
}

impl Jet {
    pub fn new(derivs: &[f64]) -> Jet {
        assert!(!derivs.is_empty() && derivs.len() <= MAX_ORDER + 1);
        let mut d = [0.0; MAX_ORDER + 1];
        d[..derivs.len()].copy_from_slice(derivs);
        Jet {
            d,
            order: derivs.len() - 1,
        }
    }

    pub fn constant(c: f64, order: usize) -> Jet {
        let mut d = [0.0; MAX_ORDER + 1];
        d[0] = c;
        Jet { d, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    pub fn get(&self, k: usize) -> f64 {
        assert!(k <= self.order, "derivative {k} beyond jet order {}", self.order);
        self.d[k]
    }

    /// Jet of the derivative; loses one order.
    pub fn derivative(&self) -> Jet {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let mut d = [0.0; MAX_ORDER + 1];
        d[..self.order].copy_from_slice(&self.d[1..=self.order]);
        Jet {
            d,
            order: self.order - 1,
        }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order);
        let mut d = self.d;
        d[order + 1..].fill(0.0);
        Jet { d, order }
    }

    pub fn sqrt(&self) -> Jet {
        let n = self.order;
        let mut r = [0.0; MAX_ORDER + 1];
        r[0] = self.d[0].sqrt();
        for k in 1..=n {
            let mut acc = self.d[k];
            for j in 1..k {
                acc -= BINOM[k][j] * r[j] * r[k - j];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Jet { d: r, order: n }
    }

    pub fn div(&self, b: &Jet) -> Jet {
        let n = self.order.min(b.order);
        let mut q = [0.0; MAX_ORDER + 1];
        for k in 0..=n {
            let mut acc = self.d[k];
            for j in 1..=k {
                acc -= BINOM[k][j] * b.d[j] * q[k - j];
            }
            q[k] = acc / b.d[0];
        }
        Jet { d: q, order: n }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, b: Jet) -> Jet {
        let order = self.order.min(b.order);
        let mut d = [0.0; MAX_ORDER + 1];
        for k in 0..=order {
            d[k] = self.d[k] + b.d[k];
        }
        Jet { d, order }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, b: Jet) -> Jet {
        self + (-b)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let mut d = self.d;
        d.iter_mut().for_each(|x| *x = -*x);
        Jet { d, order: self.order }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, b: Jet) -> Jet {
        let order = self.order.min(b.order);
        let mut d = [0.0; MAX_ORDER + 1];
        for (k, slot) in d.iter_mut().enumerate().take(order + 1) {
            *slot = (0..=k).map(|j| BINOM[k][j] * self.d[j] * b.d[k - j]).sum();
        }
        Jet { d, order }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        let mut d = self.d;
        d.iter_mut().for_each(|x| *x *= c);
        Jet { d, order: self.order }
    }
}

/// Jet of a 3-vector valued function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecJet {
    pub x: Jet,
    pub y: Jet,
    pub z: Jet,
}

impl VecJet {
    /// Builds a jet from `derivs[k]` = k-th derivative vector.
    pub fn from_derivatives(derivs: &[Vector3<f64>]) -> VecJet {
        let comp = |i: usize| Jet::new(&derivs.iter().map(|v| v[i]).collect::<Vec<_>>());
        VecJet {
            x: comp(0),
            y: comp(1),
            z: comp(2),
        }
    }

    pub fn order(&self) -> usize {
        self.x.order.min(self.y.order).min(self.z.order)
    }

    /// k-th derivative vector.
    pub fn at(&self, k: usize) -> Vector3<f64> {
        Vector3::new(self.x.get(k), self.y.get(k), self.z.get(k))
    }

    pub fn value(&self) -> Vector3<f64> {
        self.at(0)
    }

    pub fn derivative(&self) -> VecJet {
        VecJet {
            x: self.x.derivative(),
            y: self.y.derivative(),
            z: self.z.derivative(),
        }
    }

    pub fn truncate(&self, order: usize) -> VecJet {
        VecJet {
            x: self.x.truncate(order),
            y: self.y.truncate(order),
            z: self.z.truncate(order),
        }
    }

    pub fn dot(&self, b: &VecJet) -> Jet {
        self.x * b.x + self.y * b.y + self.z * b.z
    }

    pub fn cross(&self, b: &VecJet) -> VecJet {
        VecJet {
            x: self.y * b.z - self.z * b.y,
            y: self.z * b.x - self.x * b.z,
            z: self.x * b.y - self.y * b.x,
        }
    }

    pub fn scale(&self, s: &Jet) -> VecJet {
        VecJet {
            x: self.x * *s,
            y: self.y * *s,
            z: self.z * *s,
        }
    }

    pub fn norm(&self) -> Jet {
        self.dot(self).sqrt()
    }

    /// `self / |self|`, differentiated exactly.
    pub fn normalized(&self) -> VecJet {
        let r = self.norm();
        VecJet {
            x: self.x.div(&r),
            y: self.y.div(&r),
            z: self.z.div(&r),
        }
    }
}

impl Add for VecJet {
    type Output = VecJet;
    fn add(self, b: VecJet) -> VecJet {
        VecJet {
            x: self.x + b.x,
            y: self.y + b.y,
            z: self.z + b.z,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin_jet(t: f64) -> Jet {
        Jet::new(&[t.sin(), t.cos(), -t.sin(), -t.cos(), t.sin()])
    }

    #[test]
    fn product_and_quotient() {
        let t: f64 = 0.3;
        // tan = sin / cos
        let cos = Jet::new(&[t.cos(), -t.sin(), -t.cos(), t.sin(), t.cos()]);
        let tan = sin_jet(t).div(&cos);
        let sec2 = 1.0 / t.cos().powi(2);
        assert!((tan.get(1) - sec2).abs() < 1e-14);
        assert!((tan.get(2) - 2.0 * sec2 * t.tan()).abs() < 1e-13);
        // sin^2 + cos^2 = 1 to all orders
        let one = sin_jet(t) * sin_jet(t) + cos * cos;
        assert!((one.value() - 1.0).abs() < 1e-15);
        for k in 1..=4 {
            assert!(one.get(k).abs() < 1e-14);
        }
    }

    #[test]
    fn sqrt_of_square() {
        // sqrt(x^2 + 1) at x = 2
        let x = Jet::new(&[2.0, 1.0, 0.0, 0.0, 0.0]);
        let r = (x * x + Jet::constant(1.0, 4)).sqrt();
        let s = 5f64.sqrt();
        assert!((r.get(1) - 2.0 / s).abs() < 1e-15);
        assert!((r.get(2) - 1.0 / (s * s * s)).abs() < 1e-15);
        assert!((r.get(3) - (-3.0 * 2.0 / s.powi(5))).abs() < 1e-14);
    }

    #[test]
    fn normalized_vector_stays_unit() {
        let t: f64 = 1.1;
        // (2 cos t, 2 sin t, 1)
        let v = VecJet::from_derivatives(&[
            Vector3::new(2.0 * t.cos(), 2.0 * t.sin(), 1.0),
            Vector3::new(-2.0 * t.sin(), 2.0 * t.cos(), 0.0),
            Vector3::new(-2.0 * t.cos(), -2.0 * t.sin(), 0.0),
            Vector3::new(2.0 * t.sin(), -2.0 * t.cos(), 0.0),
        ]);
        let n = v.normalized();
        let unit = n.dot(&n);
        assert!((unit.value() - 1.0).abs() < 1e-15);
        for k in 1..=3 {
            assert!(unit.get(k).abs() < 1e-14);
        }
        assert_eq!(n.order(), 3);
        assert_eq!(n.derivative().order(), 2);
    }
}
