use std::fmt;

use serde::Serialize;

use super::{ClassifierError, MlpModel, Sample};
use crate::SymbolClass;

const N: usize = SymbolClass::COUNT;

/// Confusion matrix (rows true, columns predicted) with per-class and
/// macro-averaged precision, recall and F1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub confusion: [[u64; N]; N],
    pub precision: [f64; N],
    pub recall: [f64; N],
    pub f1: [f64; N],
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
}

impl MetricsReport {
    pub fn from_confusion(confusion: [[u64; N]; N]) -> Self {
        let ratio = |num: u64, den: u64| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let mut precision = [0.0; N];
        let mut recall = [0.0; N];
        let mut f1 = [0.0; N];
        for c in 0..N {
            let row: u64 = confusion[c].iter().sum();
            let col: u64 = confusion.iter().map(|r| r[c]).sum();
            precision[c] = ratio(confusion[c][c], col);
            recall[c] = ratio(confusion[c][c], row);
            let s = precision[c] + recall[c];
            f1[c] = if s == 0.0 {
                0.0
            } else {
                2.0 * precision[c] * recall[c] / s
            };
        }
        let mean = |v: &[f64; N]| v.iter().sum::<f64>() / N as f64;
        let total: u64 = confusion.iter().flatten().sum();
        let hits: u64 = (0..N).map(|c| confusion[c][c]).sum();
        Self {
            macro_precision: mean(&precision),
            macro_recall: mean(&recall),
            macro_f1: mean(&f1),
            accuracy: ratio(hits, total),
            confusion,
            precision,
            recall,
            f1,
        }
    }

    /// Builds the matrix from `(true, predicted)` pairs.
    pub fn from_predictions(
        pairs: impl IntoIterator<Item = (SymbolClass, SymbolClass)>,
    ) -> Result<Self, ClassifierError> {
        let mut m = [[0u64; N]; N];
        let mut any = false;
        for (t, p) in pairs {
            m[t.code()][p.code()] += 1;
            any = true;
        }
        if !any {
            return Err(ClassifierError::EmptyTestSet);
        }
        Ok(Self::from_confusion(m))
    }

    pub fn support(&self, class: SymbolClass) -> u64 {
        self.confusion[class.code()].iter().sum()
    }

    /// `M[a][b] + M[b][a]` for every unordered pair of distinct classes,
    /// largest first (ties keep code order).
    pub fn confusion_pairs(&self) -> Vec<((SymbolClass, SymbolClass), u64)> {
        let mut pairs = Vec::with_capacity(N * (N - 1) / 2);
        for a in 0..N {
            for b in a + 1..N {
                let mass = self.confusion[a][b] + self.confusion[b][a];
                let ca = SymbolClass::from_code(a).expect("code < 6");
                let cb = SymbolClass::from_code(b).expect("code < 6");
                pairs.push(((ca, cb), mass));
            }
        }
        pairs.sort_by_key(|p| std::cmp::Reverse(p.1));
        pairs
    }
}

/// Aligned table: confusion counts, then P, R and F1 per true class.
impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name_w = SymbolClass::ALL
            .iter()
            .map(|c| c.label().len())
            .max()
            .unwrap_or(0);
        write!(f, "{:name_w$}", "")?;
        for c in SymbolClass::ALL {
            write!(f, "  {:>w$}", c.label(), w = c.label().len().max(5))?;
        }
        writeln!(f, "  {:>5}  {:>5}  {:>5}", "P", "R", "F1")?;
        for t in SymbolClass::ALL {
            write!(f, "{:name_w$}", t.label())?;
            for p in SymbolClass::ALL {
                write!(
                    f,
                    "  {:>w$}",
                    self.confusion[t.code()][p.code()],
                    w = p.label().len().max(5)
                )?;
            }
            let i = t.code();
            writeln!(
                f,
                "  {:>5.2}  {:>5.2}  {:>5.2}",
                self.precision[i], self.recall[i], self.f1[i]
            )?;
        }
        write!(
            f,
            "macro P {:.3}  R {:.3}  F1 {:.3}  accuracy {:.3}",
            self.macro_precision, self.macro_recall, self.macro_f1, self.accuracy
        )
    }
}

/// Runs the model over `test` and tabulates the predictions.
pub fn evaluate(model: &MlpModel, test: &[Sample]) -> Result<MetricsReport, ClassifierError> {
    if test.is_empty() {
        return Err(ClassifierError::EmptyTestSet);
    }
    let pairs = test
        .iter()
        .map(|s| Ok((s.label, model.predict(&s.features)?.0)))
        .collect::<Result<Vec<_>, ClassifierError>>()?;
    MetricsReport::from_predictions(pairs)
}
