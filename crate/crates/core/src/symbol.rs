use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The six arrow symbols, with codes 0–5 in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolClass {
    Up,
    Down,
    ForwardRight,
    ForwardLeft,
    RotateRight,
    RotateLeft,
}

impl SymbolClass {
    pub const COUNT: usize = 6;

    pub const ALL: [SymbolClass; 6] = [
        SymbolClass::Up,
        SymbolClass::Down,
        SymbolClass::ForwardRight,
        SymbolClass::ForwardLeft,
        SymbolClass::RotateRight,
        SymbolClass::RotateLeft,
    ];

    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: usize) -> Option<Self> {
        Self::ALL.get(code).copied()
    }

    /// Canonical lower-case name, as used in files and JSON.
    pub fn name(self) -> &'static str {
        match self {
            SymbolClass::Up => "up",
            SymbolClass::Down => "down",
            SymbolClass::ForwardRight => "forward_right",
            SymbolClass::ForwardLeft => "forward_left",
            SymbolClass::RotateRight => "rotate_right",
            SymbolClass::RotateLeft => "rotate_left",
        }
    }

    /// Human-readable label for tables.
    pub fn label(self) -> &'static str {
        match self {
            SymbolClass::Up => "Up",
            SymbolClass::Down => "Down",
            SymbolClass::ForwardRight => "Forward Right",
            SymbolClass::ForwardLeft => "Forward Left",
            SymbolClass::RotateRight => "Rotate Right",
            SymbolClass::RotateLeft => "Rotate Left",
        }
    }

    /// Left/right counterpart; Up and Down map to themselves.
    pub fn mirrored(self) -> Self {
        match self {
            SymbolClass::ForwardRight => SymbolClass::ForwardLeft,
            SymbolClass::ForwardLeft => SymbolClass::ForwardRight,
            SymbolClass::RotateRight => SymbolClass::RotateLeft,
            SymbolClass::RotateLeft => SymbolClass::RotateRight,
            other => other,
        }
    }
}

impl fmt::Display for SymbolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown symbol name {0:?}")]
pub struct UnknownSymbol(pub String);

impl FromStr for SymbolClass {
    type Err = UnknownSymbol;

    /// Case-insensitive, surrounding whitespace ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| UnknownSymbol(t.to_string()))
    }
}
