//! Elastic distances: SQED, DTW, CDTW, WDTW and ADTW.
//!
//! Each measure has a full-matrix reference form ([`cost_matrix`],
//! [`naive_distance`]) and an O(len) two-row form ([`distance`],
//! [`distance_ea`]). The two forms agree bit for bit.

mod kernel;
mod matrix;
mod path;
mod weights;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TimeSeries;

pub use matrix::{cost_matrix, naive_distance, CostMatrix};
pub use path::{path_cost, path_to_csv, warping_path};
pub use weights::{weight_vector, WeightCache};

use kernel::{sqed_ea, Kernel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sqed,
    Dtw,
    Cdtw,
    Wdtw,
    Adtw,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Sqed,
        Family::Dtw,
        Family::Cdtw,
        Family::Wdtw,
        Family::Adtw,
    ];

    /// Lower-case identifier used on the command line and in file names.
    pub fn id(self) -> &'static str {
        match self {
            Family::Sqed => "sqed",
            Family::Dtw => "dtw",
            Family::Cdtw => "cdtw",
            Family::Wdtw => "wdtw",
            Family::Adtw => "adtw",
        }
    }

    /// Whether the family carries a tunable parameter.
    pub fn is_parameterized(self) -> bool {
        matches!(self, Family::Cdtw | Family::Wdtw | Family::Adtw)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id().to_ascii_uppercase())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown measure `{s}`")))
    }
}

/// A measure together with its parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DistanceSpec<T> {
    Sqed,
    Dtw,
    /// Sakoe-Chiba band: alignments restricted to `|i - j| <= window`.
    Cdtw {
        window: usize,
    },
    /// Sigmoid weight factor `g > 0`.
    Wdtw {
        g: T,
    },
    /// Amercing penalty `penalty >= 0` added to every warping step.
    Adtw {
        penalty: T,
    },
}

impl<T: Scalar> DistanceSpec<T> {
    pub fn cdtw(window: usize) -> Self {
        DistanceSpec::Cdtw { window }
    }

    pub fn wdtw(g: T) -> Result<Self> {
        let spec = DistanceSpec::Wdtw { g };
        spec.validate().map(|_| spec)
    }

    pub fn adtw(penalty: T) -> Result<Self> {
        let spec = DistanceSpec::Adtw { penalty };
        spec.validate().map(|_| spec)
    }

    /// Builds a spec from a family tag and an optional numeric parameter.
    pub fn from_family(family: Family, param: Option<f64>) -> Result<Self> {
        let need = |what: &str| {
            param.ok_or_else(|| {
                Error::InvalidParameter(format!("{family} requires a {what} parameter"))
            })
        };
        let spec = match family {
            Family::Sqed | Family::Dtw => {
                if param.is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "{family} takes no parameter"
                    )));
                }
                if family == Family::Sqed {
                    DistanceSpec::Sqed
                } else {
                    DistanceSpec::Dtw
                }
            }
            Family::Cdtw => {
                let w = need("window")?;
                if !(w >= 0.0 && w.fract() == 0.0 && w.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "window must be a nonnegative integer, got {w}"
                    )));
                }
                DistanceSpec::Cdtw { window: w as usize }
            }
            Family::Wdtw => DistanceSpec::Wdtw {
                g: T::from_f64_lossy(need("weight factor")?),
            },
            Family::Adtw => DistanceSpec::Adtw {
                penalty: T::from_f64_lossy(need("penalty")?),
            },
        };
        spec.validate().map(|_| spec)
    }

    pub fn family(&self) -> Family {
        match self {
            DistanceSpec::Sqed => Family::Sqed,
            DistanceSpec::Dtw => Family::Dtw,
            DistanceSpec::Cdtw { .. } => Family::Cdtw,
            DistanceSpec::Wdtw { .. } => Family::Wdtw,
            DistanceSpec::Adtw { .. } => Family::Adtw,
        }
    }

    /// Parameter value as `f64`, if the family has one.
    pub fn param(&self) -> Option<f64> {
        match *self {
            DistanceSpec::Sqed | DistanceSpec::Dtw => None,
            DistanceSpec::Cdtw { window } => Some(window as f64),
            DistanceSpec::Wdtw { g } => Some(g.as_f64()),
            DistanceSpec::Adtw { penalty } => Some(penalty.as_f64()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistanceSpec::Wdtw { g } if !(g > T::zero() && g.is_finite()) => Err(
                Error::InvalidParameter(format!("weight factor must be positive, got {g}")),
            ),
            // +inf is allowed: it confines the path to the diagonal
            DistanceSpec::Adtw { penalty } if penalty.is_nan() || penalty < T::zero() => Err(
                Error::InvalidParameter(format!("penalty must be nonnegative, got {penalty}")),
            ),
            _ => Ok(()),
        }
    }
}

impl<T: Scalar> fmt::Display for DistanceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(p) => write!(f, "{}({p})", self.family()),
            None => write!(f, "{}", self.family()),
        }
    }
}

/// Distance under `spec`, computed with two DP rows.
pub fn distance<T: Scalar>(
    spec: &DistanceSpec<T>,
    s: &TimeSeries<T>,
    t: &TimeSeries<T>,
) -> Result<T> {
    distance_ea(spec, s, t, T::infinity())
}

/// Early-abandoning distance.
///
/// Returns the exact distance when it is `<= cutoff`, and `+inf` otherwise.
pub fn distance_ea<T: Scalar>(
    spec: &DistanceSpec<T>,
    s: &TimeSeries<T>,
    t: &TimeSeries<T>,
    cutoff: T,
) -> Result<T> {
    if cutoff.is_nan() || cutoff < T::zero() {
        return Err(Error::InvalidParameter(format!(
            "cutoff must be nonnegative, got {cutoff}"
        )));
    }
    let kernel = Kernel::new(spec, s.len(), t.len())?;
    Ok(match spec {
        DistanceSpec::Sqed => sqed_ea(s, t, cutoff),
        _ => kernel.rolling(s, t, cutoff),
    })
}

/// Squared Euclidean distance; the series must have equal lengths.
pub fn sqed<T: Scalar>(s: &TimeSeries<T>, t: &TimeSeries<T>) -> Result<T> {
    distance(&DistanceSpec::Sqed, s, t)
}

pub fn dtw<T: Scalar>(s: &TimeSeries<T>, t: &TimeSeries<T>) -> T {
    distance(&DistanceSpec::Dtw, s, t).expect("DTW is defined for all non-empty series")
}

/// Errors when `window` is smaller than the length difference.
pub fn cdtw<T: Scalar>(s: &TimeSeries<T>, t: &TimeSeries<T>, window: usize) -> Result<T> {
    distance(&DistanceSpec::Cdtw { window }, s, t)
}

/// # Panics
/// If `g` is not strictly positive and finite.
pub fn wdtw<T: Scalar>(s: &TimeSeries<T>, t: &TimeSeries<T>, g: T) -> T {
    let spec = DistanceSpec::wdtw(g).expect("invalid WDTW weight factor");
    distance(&spec, s, t).unwrap()
}

/// # Panics
/// If `penalty` is negative or NaN.
pub fn adtw<T: Scalar>(s: &TimeSeries<T>, t: &TimeSeries<T>, penalty: T) -> T {
    let spec = DistanceSpec::adtw(penalty).expect("invalid ADTW penalty");
    distance(&spec, s, t).unwrap()
}
