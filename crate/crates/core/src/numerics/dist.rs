use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::rng::RngStream;

/// The distributions the simulation code draws from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Dist {
    Uniform01,
    StdNormal,
    Gamma { shape: f64, scale: f64 },
    ChiSquare { df: f64 },
}

impl Dist {
    pub fn gamma(shape: f64, scale: f64) -> Result<Dist> {
        let d = Dist::Gamma { shape, scale };
        d.validate()?;
        Ok(d)
    }

    pub fn chi_square(df: f64) -> Result<Dist> {
        let d = Dist::ChiSquare { df };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Dist::Uniform01 | Dist::StdNormal => Ok(()),
            Dist::Gamma { shape, scale } => {
                if shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "gamma requires shape, scale > 0; got ({shape}, {scale})"
                    )))
                }
            }
            Dist::ChiSquare { df } => {
                if df > 0.0 && df.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "chi-square requires df > 0; got {df}"
                    )))
                }
            }
        }
    }

    /// Build a reusable sampler; do this once outside hot loops.
    pub fn sampler(&self) -> Result<Sampler> {
        self.validate()?;
        Ok(match *self {
            Dist::Uniform01 => Sampler::Uniform,
            Dist::StdNormal => Sampler::Normal,
            Dist::Gamma { shape, scale } => {
                Sampler::Gamma(Gamma::new(shape, scale).map_err(|e| Error::domain(e.to_string()))?)
            }
            Dist::ChiSquare { df } => {
                Sampler::Gamma(Gamma::new(0.5 * df, 2.0).map_err(|e| Error::domain(e.to_string()))?)
            }
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Sampler {
    Uniform,
    Normal,
    Gamma(Gamma<f64>),
}

impl Distribution<f64> for Sampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Uniform => rng.random::<f64>(),
            Sampler::Normal => StandardNormal.sample(rng),
            Sampler::Gamma(g) => g.sample(rng),
        }
    }
}

/// First draw from `dist` on the given stream.
pub fn sample(dist: Dist, stream: RngStream) -> Result<f64> {
    let s = dist.sampler()?;
    Ok(s.sample(&mut stream.rng()))
}

/// The first `count` draws from `dist` on the given stream.
pub fn sample_n(dist: Dist, stream: RngStream, count: usize) -> Result<Vec<f64>> {
    let s = dist.sampler()?;
    let mut rng = stream.rng();
    Ok((0..count).map(|_| s.sample(&mut rng)).collect())
}
