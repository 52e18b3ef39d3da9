//! Symbol programs and their translation to motion commands.
//!
//! Angles are in degrees with counter-clockwise positive, so "right"
//! symbols turn by a negative angle. Distances are in millimetres.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::SymbolClass;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompilerError {
    #[error("unknown symbol name {token:?} at position {index}")]
    UnknownSymbolName { token: String, index: usize },
    #[error("{confidences} confidences for {symbols} symbols")]
    ConfidenceCountMismatch { symbols: usize, confidences: usize },
    #[error("confidence {0} outside [0, 1]")]
    ConfidenceOutOfRange(f64),
    #[error("invalid compiler configuration: {0}")]
    InvalidConfig(&'static str),
}

/// Ordered symbols, optionally with the recogniser's confidence for each.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "ProgramDoc", into = "ProgramDoc")]
pub struct Program {
    symbols: Vec<SymbolClass>,
    confidences: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ProgramDoc {
    symbols: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    confidences: Option<Vec<f64>>,
}

impl TryFrom<ProgramDoc> for Program {
    type Error = CompilerError;

    fn try_from(doc: ProgramDoc) -> Result<Self, Self::Error> {
        let p = Program::from_names(doc.symbols.iter().map(String::as_str))?;
        match doc.confidences {
            Some(c) => p.with_confidences(c),
            None => Ok(p),
        }
    }
}

impl From<Program> for ProgramDoc {
    fn from(p: Program) -> Self {
        Self {
            symbols: p.symbols.iter().map(|s| s.name().to_owned()).collect(),
            confidences: p.confidences,
        }
    }
}

impl Program {
    pub fn new(symbols: Vec<SymbolClass>) -> Self {
        Self {
            symbols,
            confidences: None,
        }
    }

    /// Parses each name case-insensitively after trimming whitespace.
    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<Self, CompilerError> {
        let symbols = names
            .into_iter()
            .enumerate()
            .map(|(index, token)| {
                token.parse().map_err(|_| CompilerError::UnknownSymbolName {
                    token: token.trim().to_owned(),
                    index,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self::new(symbols))
    }

    pub fn with_confidences(self, confidences: Vec<f64>) -> Result<Self, CompilerError> {
        if confidences.len() != self.symbols.len() {
            return Err(CompilerError::ConfidenceCountMismatch {
                symbols: self.symbols.len(),
                confidences: confidences.len(),
            });
        }
        if let Some(&bad) = confidences.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(CompilerError::ConfidenceOutOfRange(bad));
        }
        Ok(Self {
            symbols: self.symbols,
            confidences: Some(confidences),
        })
    }

    pub fn symbols(&self) -> &[SymbolClass] {
        &self.symbols
    }

    pub fn confidences(&self) -> Option<&[f64]> {
        self.confidences.as_deref()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Left and right swapped in every symbol; confidences are dropped.
    pub fn mirrored(&self) -> Self {
        Self::new(self.symbols.iter().map(|s| s.mirrored()).collect())
    }

    /// Concatenation; confidences survive only if both sides carry them.
    pub fn concat(&self, other: &Program) -> Self {
        let symbols = self.symbols.iter().chain(&other.symbols).copied().collect();
        let confidences = match (&self.confidences, &other.confidences) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Self {
            symbols,
            confidences,
        }
    }

    /// Comma-separated canonical names; the inverse of [`parse_symbols`].
    pub fn to_names(&self) -> String {
        self.symbols
            .iter()
            .map(|s| s.name())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Comma-separated symbol names. Blank text is the empty program.
pub fn parse_symbols(text: &str) -> Result<Program, CompilerError> {
    if text.trim().is_empty() {
        return Ok(Program::default());
    }
    Program::from_names(text.split(','))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MotionCommand {
    Translate {
        distance_mm: f64,
    },
    Rotate {
        angle_deg: f64,
    },
    /// Constant-curvature move: the heading changes by `heading_change_deg`
    /// while the robot advances `chord_mm` in a straight line from start to
    /// end point.
    Arc {
        heading_change_deg: f64,
        chord_mm: f64,
    },
}

impl MotionCommand {
    /// The command that undoes this one (arcs retrace backwards).
    pub fn inverse(self) -> Self {
        match self {
            MotionCommand::Translate { distance_mm } => MotionCommand::Translate {
                distance_mm: -distance_mm,
            },
            MotionCommand::Rotate { angle_deg } => MotionCommand::Rotate {
                angle_deg: -angle_deg,
            },
            MotionCommand::Arc {
                heading_change_deg,
                chord_mm,
            } => MotionCommand::Arc {
                heading_change_deg: -heading_change_deg,
                chord_mm: -chord_mm,
            },
        }
    }

    pub fn heading_change_deg(self) -> f64 {
        match self {
            MotionCommand::Translate { .. } => 0.0,
            MotionCommand::Rotate { angle_deg } => angle_deg,
            MotionCommand::Arc {
                heading_change_deg, ..
            } => heading_change_deg,
        }
    }

    pub fn distance_mm(self) -> f64 {
        match self {
            MotionCommand::Translate { distance_mm } => distance_mm,
            MotionCommand::Rotate { .. } => 0.0,
            MotionCommand::Arc { chord_mm, .. } => chord_mm,
        }
    }
}

/// Commands in reverse order, each inverted: running a program followed by
/// its reverse returns to the start pose.
pub fn reverse_commands(commands: &[MotionCommand]) -> Vec<MotionCommand> {
    commands.iter().rev().map(|c| c.inverse()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompilerConfig {
    step_mm: f64,
    turn_deg: f64,
}

impl Default for CompilerConfig {
    fn default() -> Self {
        Self {
            step_mm: 110.0,
            turn_deg: 45.0,
        }
    }
}

impl CompilerConfig {
    pub fn new(step_mm: f64, turn_deg: f64) -> Result<Self, CompilerError> {
        if !(step_mm > 0.0 && step_mm.is_finite()) {
            return Err(CompilerError::InvalidConfig("step must be positive"));
        }
        if !(turn_deg > 0.0 && turn_deg <= 180.0) {
            return Err(CompilerError::InvalidConfig("turn must lie in (0, 180]"));
        }
        Ok(Self { step_mm, turn_deg })
    }

    pub fn step_mm(&self) -> f64 {
        self.step_mm
    }

    pub fn turn_deg(&self) -> f64 {
        self.turn_deg
    }

    /// Radius of the arc whose chord is one step and whose heading changes
    /// by one turn.
    pub fn arc_radius_mm(&self) -> f64 {
        self.step_mm / (2.0 * (self.turn_deg.to_radians() / 2.0).sin())
    }
}

pub fn compile_symbol(symbol: SymbolClass, cfg: &CompilerConfig) -> MotionCommand {
    let (step, turn) = (cfg.step_mm, cfg.turn_deg);
    match symbol {
        SymbolClass::Up => MotionCommand::Translate { distance_mm: step },
        SymbolClass::Down => MotionCommand::Translate { distance_mm: -step },
        SymbolClass::RotateLeft => MotionCommand::Rotate { angle_deg: turn },
        SymbolClass::RotateRight => MotionCommand::Rotate { angle_deg: -turn },
        SymbolClass::ForwardLeft => MotionCommand::Arc {
            heading_change_deg: turn,
            chord_mm: step,
        },
        SymbolClass::ForwardRight => MotionCommand::Arc {
            heading_change_deg: -turn,
            chord_mm: step,
        },
    }
}

pub fn compile(program: &Program, cfg: &CompilerConfig) -> Vec<MotionCommand> {
    program
        .symbols
        .iter()
        .map(|&s| compile_symbol(s, cfg))
        .collect()
}
