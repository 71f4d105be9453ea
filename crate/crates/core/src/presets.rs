//! Named test states on labels `0..n`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bell::{make_bell, BellKind};
use crate::error::{Error, Result};
use crate::state::{label_range, QubitLabel, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `(|0…0⟩ + |1…1⟩)/√2`
    Ghz,
    /// Equal superposition of the single-excitation basis states.
    W,
    /// The singlet; requires `n = 2`.
    Bell,
    /// `|+⟩|0⟩|+⟩|0⟩…`
    Product,
}

impl Preset {
    pub fn build(self, n: usize) -> Result<StateVector> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        let labels = label_range(0, n);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Preset::Ghz => {
                let mut amps = vec![zero; 1 << n];
                amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                amps[(1 << n) - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                StateVector::new(labels, amps)
            }
            Preset::W => {
                let mut amps = vec![zero; 1 << n];
                let w = 1.0 / (n as f64).sqrt();
                for k in 0..n {
                    amps[1 << k] = Complex64::new(w, 0.0);
                }
                StateVector::new(labels, amps)
            }
            Preset::Bell => {
                if n != 2 {
                    return Err(Error::InvalidPreset(format!("bell needs n = 2, got {n}")));
                }
                make_bell(BellKind::PhiMinus, (QubitLabel(0), QubitLabel(1)))
            }
            Preset::Product => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                let mut state: Option<StateVector> = None;
                for (k, &label) in labels.iter().enumerate() {
                    let q = if k % 2 == 0 {
                        StateVector::qubit(label, h, h)?
                    } else {
                        StateVector::basis(vec![label], &[0])?
                    };
                    state = Some(match state {
                        None => q,
                        Some(s) => s.tensor(&q)?,
                    });
                }
                Ok(state.expect("n >= 1"))
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Ghz => "ghz",
            Preset::W => "w",
            Preset::Bell => "bell",
            Preset::Product => "product",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ghz" => Ok(Preset::Ghz),
            "w" => Ok(Preset::W),
            "bell" => Ok(Preset::Bell),
            "product" => Ok(Preset::Product),
            other => Err(Error::InvalidPreset(other.to_string())),
        }
    }
}
