/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

const RESCALE_BITS: i32 = 256;
const RESCALE_HI: f64 = 1.157_920_892_373_162e77; // 2^256
const RESCALE_LO: f64 = 8.636_168_555_094_445e-78; // 2^-256

/// Running product stored as `mantissa * 2^exponent` so that long products of
/// cosines neither underflow nor lose their value when factors are divided
/// back out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledProduct {
    mantissa: f64,
    exponent: i32,
}

impl Default for ScaledProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl ScaledProduct {
    pub const fn one() -> Self {
        Self {
            mantissa: 1.0,
            exponent: 0,
        }
    }

    #[inline]
    pub fn mul(&mut self, factor: f64) {
        self.mantissa *= factor;
        self.normalize();
    }

    #[inline]
    pub fn div(&mut self, factor: f64) {
        self.mantissa /= factor;
        self.normalize();
    }

    #[inline]
    fn normalize(&mut self) {
        let a = self.mantissa.abs();
        if a == 0.0 {
            return;
        }
        if a < RESCALE_LO {
            self.mantissa *= RESCALE_HI;
            self.exponent -= RESCALE_BITS;
        } else if a > RESCALE_HI {
            self.mantissa *= RESCALE_LO;
            self.exponent += RESCALE_BITS;
        }
    }

    pub fn value(&self) -> f64 {
        let mut m = self.mantissa;
        let mut e = self.exponent;
        while e <= -RESCALE_BITS {
            m *= RESCALE_LO;
            e += RESCALE_BITS;
            if m == 0.0 {
                return m;
            }
        }
        while e >= RESCALE_BITS {
            m *= RESCALE_HI;
            e -= RESCALE_BITS;
        }
        m * 2f64.powi(e)
    }
}

impl FromIterator<f64> for ScaledProduct {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut p = ScaledProduct::one();
        for v in iter {
            p.mul(v);
        }
        p
    }
}
