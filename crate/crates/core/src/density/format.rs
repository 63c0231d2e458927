//! Text format for component models.
//!
//! ```text
//! # S4 over A4, X = the 4-cycles
//! degree 4
//! group  (1,2,3,4) (1,2)
//! normal (1,2,3) (2,3,4)
//! set class (1,2,3,4)
//! ```
//!
//! Permutations use 1-based cycle notation without spaces inside a
//! permutation; `()` is the identity. `degree` is optional and defaults to
//! the largest point mentioned. `set` directives accumulate into `X`:
//! `class g` adds the conjugacy class of `g`, `coset g` adds `gN` together
//! with its conjugates, `all` adds `Γ`, and `none` adds nothing.

use std::collections::BTreeSet;

use super::group::{ClassStableSet, ComponentModel, Permutation};
use super::DensityError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetDirective {
    Class(Vec<Vec<u32>>),
    Coset(Vec<Vec<u32>>),
    All,
    None,
}

/// Parsed but unbuilt group file. Cycles hold 0-based points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Vec<Vec<u32>>>,
    pub normal: Vec<Vec<Vec<u32>>>,
    pub set: Vec<SetDirective>,
}

fn parse_perm(tok: &str, line: usize) -> Result<Vec<Vec<u32>>, DensityError> {
    let err = |msg: String| DensityError::Parse { line, msg };
    let tok = tok.trim();
    if !tok.starts_with('(') || !tok.ends_with(')') {
        return Err(err(format!("expected cycle notation, got {tok:?}")));
    }
    let mut cycles = Vec::new();
    for part in tok[1..tok.len() - 1].split(")(") {
        if part.is_empty() {
            continue;
        }
        let cyc: Result<Vec<u32>, _> = part
            .split(',')
            .map(|s| match s.trim().parse::<u32>() {
                Ok(0) | Err(_) => Err(err(format!("bad point {s:?} in {tok:?}"))),
                Ok(v) => Ok(v - 1),
            })
            .collect();
        let cyc = cyc?;
        let distinct: BTreeSet<_> = cyc.iter().collect();
        if distinct.len() != cyc.len() {
            return Err(err(format!("repeated point in cycle {tok:?}")));
        }
        cycles.push(cyc);
    }
    Ok(cycles)
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec, DensityError> {
    let mut degree: Option<usize> = None;
    let mut generators = Vec::new();
    let mut normal = Vec::new();
    let mut set = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let key = toks.next().unwrap_or_default();
        match key {
            "degree" => {
                let d = toks
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| DensityError::Parse {
                        line,
                        msg: "degree expects a positive integer".into(),
                    })?;
                degree = Some(d);
            }
            "group" => {
                for t in toks {
                    generators.push(parse_perm(t, line)?);
                }
            }
            "normal" => {
                for t in toks {
                    normal.push(parse_perm(t, line)?);
                }
            }
            "set" => {
                let kind = toks.next().unwrap_or_default();
                let rest: Vec<&str> = toks.collect();
                match kind {
                    "all" => set.push(SetDirective::All),
                    "none" => set.push(SetDirective::None),
                    "class" | "coset" => {
                        if rest.is_empty() {
                            return Err(DensityError::Parse {
                                line,
                                msg: format!("set {kind} needs a permutation"),
                            });
                        }
                        for t in rest {
                            let p = parse_perm(t, line)?;
                            set.push(if kind == "class" {
                                SetDirective::Class(p)
                            } else {
                                SetDirective::Coset(p)
                            });
                        }
                    }
                    other => {
                        return Err(DensityError::Parse {
                            line,
                            msg: format!("unknown set kind {other:?}"),
                        })
                    }
                }
            }
            other => {
                return Err(DensityError::Parse {
                    line,
                    msg: format!("unknown directive {other:?}"),
                })
            }
        }
    }
    if generators.is_empty() {
        return Err(DensityError::Parse {
            line: 0,
            msg: "no group generators".into(),
        });
    }
    let max_point = generators
        .iter()
        .chain(&normal)
        .chain(set.iter().filter_map(|d| match d {
            SetDirective::Class(c) | SetDirective::Coset(c) => Some(c),
            _ => None,
        }))
        .flatten()
        .flatten()
        .map(|&p| p as usize + 1)
        .max()
        .unwrap_or(1);
    let degree = degree.unwrap_or(max_point);
    if max_point > degree {
        return Err(DensityError::Parse {
            line: 0,
            msg: format!("point {max_point} exceeds degree {degree}"),
        });
    }
    Ok(GroupSpec {
        degree,
        generators,
        normal,
        set,
    })
}

impl GroupSpec {
    fn perm(&self, cycles: &[Vec<u32>]) -> Permutation {
        Permutation::from_cycles(self.degree, cycles).expect("points validated against degree")
    }

    pub fn build(&self) -> Result<(ComponentModel, ClassStableSet), DensityError> {
        let gens: Vec<Permutation> = self.generators.iter().map(|c| self.perm(c)).collect();
        let normal: Vec<Permutation> = self.normal.iter().map(|c| self.perm(c)).collect();
        let model = ComponentModel::new(self.degree, &gens, &normal)?;
        let mut elements = BTreeSet::new();
        for d in &self.set {
            match d {
                SetDirective::All => elements.extend(0..model.order()),
                SetDirective::None => {}
                SetDirective::Class(c) | SetDirective::Coset(c) => {
                    let p = self.perm(c);
                    let g = model
                        .index_of(&p)
                        .ok_or_else(|| DensityError::NotASubgroup(p.to_string()))?;
                    if matches!(d, SetDirective::Class(_)) {
                        elements.extend(model.conjugacy_class(g));
                    } else {
                        let coset = model.coset(model.coset_of(g)).to_vec();
                        elements.extend(model.conjugation_closure(coset));
                    }
                }
            }
        }
        let x = model.class_stable_set(elements)?;
        Ok((model, x))
    }
}
