//! Smoothing kernels: a fixed menu of compactly supported Lipschitz kernels
//! integrating to one, with exact squared-integral constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel menu. The type only admits kernels with `int K = 1`, compact
/// support `[-1, 1]` and a Lipschitz shape; a rescaled kernel with a
/// different mass is not representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Epanechnikov,
    Triangular,
    Quartic,
}

impl Kernel {
    /// Evaluate `K(x)`; zero outside `[-1, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let a = x.abs();
        if a >= 1.0 {
            return 0.0;
        }
        match self {
            Kernel::Epanechnikov => 0.75 * (1.0 - x * x),
            Kernel::Triangular => 1.0 - a,
            Kernel::Quartic => {
                let u = 1.0 - x * x;
                0.9375 * u * u
            }
        }
    }

    /// Support radius: all three kernels live on `[-1, 1]`.
    pub fn support_radius(&self) -> f64 {
        1.0
    }

    /// Exact `int K(x)^2 dx`: 3/5, 2/3 and 5/7 respectively.
    pub fn squared_integral(&self) -> f64 {
        match self {
            Kernel::Epanechnikov => 3.0 / 5.0,
            Kernel::Triangular => 2.0 / 3.0,
            Kernel::Quartic => 5.0 / 7.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Epanechnikov => "epanechnikov",
            Kernel::Triangular => "triangular",
            Kernel::Quartic => "quartic",
        }
    }

    pub fn from_name(name: &str) -> Result<Kernel> {
        match name.to_ascii_lowercase().as_str() {
            "epanechnikov" => Ok(Kernel::Epanechnikov),
            "triangular" => Ok(Kernel::Triangular),
            "quartic" => Ok(Kernel::Quartic),
            other => Err(Error::Config(format!(
                "unknown kernel '{other}' (choose epanechnikov, triangular or quartic)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric_integral(f: impl Fn(f64) -> f64) -> f64 {
        // Simpson on [-1, 1] with a fine grid; the kernels are smooth
        // piecewise polynomials so this is near machine precision.
        let n = 20_000;
        let h = 2.0 / n as f64;
        let mut s = f(-1.0) + f(1.0);
        for i in 1..n {
            let x = -1.0 + i as f64 * h;
            s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
        }
        s * h / 3.0
    }

    #[test]
    fn kernels_integrate_to_one() {
        for k in [Kernel::Epanechnikov, Kernel::Triangular, Kernel::Quartic] {
            let mass = numeric_integral(|x| k.eval(x));
            assert!((mass - 1.0).abs() < 1e-8, "{}: mass {mass}", k.name());
        }
    }

    #[test]
    fn squared_integrals_match_constants() {
        for k in [Kernel::Epanechnikov, Kernel::Triangular, Kernel::Quartic] {
            let num = numeric_integral(|x| k.eval(x) * k.eval(x));
            assert!(
                (num - k.squared_integral()).abs() < 1e-8,
                "{}: {num} vs {}",
                k.name(),
                k.squared_integral()
            );
        }
    }

    #[test]
    fn compact_support() {
        for k in [Kernel::Epanechnikov, Kernel::Triangular, Kernel::Quartic] {
            assert_eq!(k.eval(1.0), 0.0);
            assert_eq!(k.eval(-1.2), 0.0);
            assert!(k.eval(0.0) > 0.0);
        }
    }
}
