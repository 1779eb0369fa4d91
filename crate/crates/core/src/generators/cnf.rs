use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::GenError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub variable_count: usize,
    pub clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.variable_count
            && self
                .clauses
                .iter()
                .all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// Some satisfying assignment, by exhaustive search.
    pub fn brute_force_model(&self) -> Option<Vec<bool>> {
        assert!(
            self.variable_count < 26,
            "exhaustive search limited to 25 variables"
        );
        (0u64..1 << self.variable_count)
            .map(|bits| {
                (0..self.variable_count)
                    .map(|i| bits >> i & 1 == 1)
                    .collect::<Vec<_>>()
            })
            .find(|a| self.satisfied_by(a))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                let v = l.var as i64 + 1;
                write!(out, "{} ", if l.positive { v } else { -v }).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>` header,
/// then zero-terminated clauses (which may span lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, GenError> {
    let bad = |line: usize, msg: &str| GenError::Dimacs {
        line,
        message: msg.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if header.is_some() {
                return Err(bad(line, "duplicate header"));
            }
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v.parse().map_err(|_| bad(line, "bad variable count"))?;
                    let c = c.parse().map_err(|_| bad(line, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(bad(line, "malformed header")),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(bad(line, "clause before header"));
        };
        for tok in trimmed.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| bad(line, "bad literal"))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > vars {
                return Err(bad(line, "variable out of range"));
            }
            current.push(Literal {
                var: var - 1,
                positive: lit > 0,
            });
        }
    }
    let Some((variable_count, count)) = header else {
        return Err(bad(0, "missing header"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(bad(
            0,
            &format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(CnfFormula {
        variable_count,
        clauses,
    })
}

/// Normalizes a formula in which every variable occurs exactly three times so
/// that each occurs negated exactly once, flipping variables with two
/// negative occurrences. Returns the flipped variables alongside.
pub fn normalize_formula(raw: &CnfFormula) -> Result<(CnfFormula, BTreeSet<usize>), GenError> {
    let p = raw.variable_count;
    let mut occ = vec![0usize; p];
    let mut neg = vec![0usize; p];
    for (j, clause) in raw.clauses.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for l in clause {
            if l.var >= p {
                return Err(GenError::VariableOutOfRange(l.var));
            }
            if !seen.insert(l.var) {
                return Err(GenError::RepeatedVariable {
                    var: l.var,
                    clause: j,
                });
            }
            occ[l.var] += 1;
            if !l.positive {
                neg[l.var] += 1;
            }
        }
    }
    if let Some(v) = (0..p).find(|&v| occ[v] != 3) {
        return Err(GenError::OccurrenceCount {
            var: v,
            count: occ[v],
        });
    }
    if let Some(v) = (0..p).find(|&v| neg[v] == 0 || neg[v] == 3) {
        return Err(GenError::Unnormalizable {
            var: v,
            negatives: neg[v],
        });
    }
    let flips: BTreeSet<usize> = (0..p).filter(|&v| neg[v] == 2).collect();
    let clauses = raw
        .clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|l| Literal {
                    var: l.var,
                    positive: l.positive != flips.contains(&l.var),
                })
                .collect()
        })
        .collect();
    Ok((
        CnfFormula {
            variable_count: p,
            clauses,
        },
        flips,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: usize, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula {
            variable_count: p,
            clauses: clauses
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&l| Literal {
                            var: l.unsigned_abs() as usize - 1,
                            positive: l > 0,
                        })
                        .collect()
                })
                .collect(),
        }
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c example\np cnf 2 3\n1 2 0\n1 2 0\n-1 -2 0\n";
        let formula = parse_dimacs(text).unwrap();
        assert_eq!(formula, f(2, &[&[1, 2], &[1, 2], &[-1, -2]]));
        assert_eq!(parse_dimacs(&formula.to_dimacs()).unwrap(), formula);
    }

    #[test]
    fn dimacs_errors() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(parse_dimacs("p dnf 1 1\n1 0\n").is_err());
    }

    #[test]
    fn normal_formula_untouched() {
        let formula = f(2, &[&[1, 2], &[1, 2], &[-1, -2]]);
        let (norm, flips) = normalize_formula(&formula).unwrap();
        assert_eq!(norm, formula);
        assert!(flips.is_empty());
    }

    #[test]
    fn two_negatives_flip() {
        let (norm, flips) = normalize_formula(&f(1, &[&[-1], &[-1], &[1]])).unwrap();
        assert_eq!(norm, f(1, &[&[1], &[1], &[-1]]));
        assert_eq!(flips, BTreeSet::from([0]));
    }

    #[test]
    fn rejections() {
        assert!(matches!(
            normalize_formula(&f(1, &[&[1], &[1]])),
            Err(GenError::OccurrenceCount { var: 0, count: 2 })
        ));
        assert!(matches!(
            normalize_formula(&f(1, &[&[1], &[1], &[1]])),
            Err(GenError::Unnormalizable {
                var: 0,
                negatives: 0
            })
        ));
        assert!(matches!(
            normalize_formula(&f(1, &[&[1, -1], &[1]])),
            Err(GenError::RepeatedVariable { var: 0, clause: 0 })
        ));
    }

    #[test]
    fn brute_force_model() {
        assert!(f(1, &[&[1], &[1], &[-1]]).brute_force_model().is_none());
        let m = f(2, &[&[1, 2], &[1, 2], &[-1, -2]])
            .brute_force_model()
            .unwrap();
        assert_eq!(m.iter().filter(|&&b| b).count(), 1);
    }
}
