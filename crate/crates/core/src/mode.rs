use std::fmt;

use serde::{Deserialize, Serialize};

/// Usage mode of a binder, variable or application.
///
/// `Zero` marks erased (compile-time only) data, `Omega` runtime data. The
/// derived ordering gives `Zero < Omega`: every runtime term may be used where
/// an erased one is expected, never the other way around.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "w")]
    Omega,
}

impl Mode {
    pub fn is_erased(self) -> bool {
        self == Mode::Zero
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Zero => "0",
            Mode::Omega => "w",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Zero => f.write_str("0"),
            Mode::Omega => f.write_str("ω"),
        }
    }
}

/// Whether a binder is written explicitly or inserted by elaboration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Icit {
    #[serde(rename = "expl")]
    Expl,
    #[serde(rename = "impl")]
    Impl,
}
