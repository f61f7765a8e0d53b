//! Complex fixed-point numbers on arbitrary-size integers, enough to sum a
//! power series whose terms dwarf its value.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// x ≈ m / 2^prec with m an integer.
#[derive(Debug, Clone)]
pub(crate) struct Fixed {
    m: BigInt,
}

impl Fixed {
    pub fn zero() -> Self {
        Fixed { m: BigInt::zero() }
    }

    /// Exact whenever `prec` reaches the binary exponent of `x`; otherwise rounded.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 {
            return Fixed::zero();
        }
        let (mant, exp, sign) = num_traits::Float::integer_decode(x);
        let mut m = BigInt::from(mant);
        let shift = exp as i64 + prec as i64;
        if shift >= 0 {
            m <<= shift as usize;
        } else {
            m = round_shr(&m, (-shift) as usize);
        }
        if sign < 0 {
            m = -m;
        }
        Fixed { m }
    }

    pub fn from_int(k: i64, prec: u32) -> Self {
        Fixed {
            m: BigInt::from(k) << prec as usize,
        }
    }

    pub fn to_f64(&self, prec: u32) -> f64 {
        let bits = self.m.bits() as i64;
        let drop = (bits - 64).max(0);
        let head = (&self.m >> drop as usize).to_f64().unwrap_or(0.0);
        ldexp(head, drop - prec as i64)
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed { m: &self.m + &o.m }
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed { m: &self.m - &o.m }
    }

    pub fn mul(&self, o: &Fixed, prec: u32) -> Fixed {
        Fixed {
            m: round_shr(&(&self.m * &o.m), prec as usize),
        }
    }

    /// self / o, rounded to the fixed grid.
    pub fn div(&self, o: &Fixed, prec: u32) -> Fixed {
        let num = &self.m << prec as usize;
        Fixed { m: num / &o.m }
    }

}

fn ldexp(x: f64, e: i64) -> f64 {
    // split the scaling so that no intermediate leaves the normal range early
    let half = (e / 2).clamp(-1000, 1000) as i32;
    let rest = (e - half as i64).clamp(-1000, 1000) as i32;
    x * 2f64.powi(half) * 2f64.powi(rest)
}

fn round_shr(m: &BigInt, s: usize) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (s - 1);
    if m.is_negative() {
        -((-m + half) >> s)
    } else {
        (m + half) >> s
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl CFixed {
    pub fn from_parts(re: f64, im: f64, prec: u32) -> Self {
        CFixed {
            re: Fixed::from_f64(re, prec),
            im: Fixed::from_f64(im, prec),
        }
    }

    pub fn add(&self, o: &CFixed) -> CFixed {
        CFixed {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn mul(&self, o: &CFixed, prec: u32) -> CFixed {
        let rr = self.re.mul(&o.re, prec);
        let ii = self.im.mul(&o.im, prec);
        let ri = self.re.mul(&o.im, prec);
        let ir = self.im.mul(&o.re, prec);
        CFixed {
            re: rr.sub(&ii),
            im: ri.add(&ir),
        }
    }

    /// Multiply by i·y for real y.
    pub fn mul_imag(&self, y: &Fixed, prec: u32) -> CFixed {
        CFixed {
            re: Fixed::zero().sub(&self.im.mul(y, prec)),
            im: self.re.mul(y, prec),
        }
    }

    pub fn div_real(&self, d: &Fixed, prec: u32) -> CFixed {
        CFixed {
            re: self.re.div(d, prec),
            im: self.im.div(d, prec),
        }
    }

    pub fn to_c64(&self, prec: u32) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(prec), self.im.to_f64(prec))
    }
}
