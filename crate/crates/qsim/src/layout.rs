use std::ops::Range;

use crate::error::QsimError;

/// Named registers laid out left to right inside one bit string.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RegisterLayout {
    regs: Vec<(String, usize)>,
}

impl RegisterLayout {
    pub fn new<S: AsRef<str>>(regs: &[(S, usize)]) -> Result<Self, QsimError> {
        let mut layout = RegisterLayout::default();
        for (name, width) in regs {
            layout.push(name.as_ref(), *width)?;
        }
        Ok(layout)
    }

    pub fn push(&mut self, name: &str, width: usize) -> Result<(), QsimError> {
        if self.contains(name) {
            return Err(QsimError::DuplicateRegister(name.to_string()));
        }
        self.regs.push((name.to_string(), width));
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.regs.iter().any(|(n, _)| n == name)
    }

    pub fn width(&self) -> usize {
        self.regs.iter().map(|(_, w)| w).sum()
    }

    pub fn register_width(&self, name: &str) -> Result<usize, QsimError> {
        self.range(name).map(|r| r.len())
    }

    pub fn range(&self, name: &str) -> Result<Range<usize>, QsimError> {
        let mut at = 0;
        for (n, w) in &self.regs {
            if n == name {
                return Ok(at..at + w);
            }
            at += w;
        }
        Err(QsimError::UnknownRegister(name.to_string()))
    }

    pub fn registers(&self) -> impl Iterator<Item = (&str, usize)> {
        self.regs.iter().map(|(n, w)| (n.as_str(), *w))
    }

    pub fn names(&self) -> Vec<String> {
        self.regs.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Layout with the named registers removed, order otherwise kept.
    pub fn without(&self, names: &[&str]) -> RegisterLayout {
        RegisterLayout {
            regs: self
                .regs
                .iter()
                .filter(|(n, _)| !names.contains(&n.as_str()))
                .cloned()
                .collect(),
        }
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<RegisterLayout, QsimError> {
        self.range(from)?;
        if from != to && self.contains(to) {
            return Err(QsimError::DuplicateRegister(to.to_string()));
        }
        let regs = self
            .regs
            .iter()
            .map(|(n, w)| (if n == from { to.to_string() } else { n.clone() }, *w))
            .collect();
        Ok(RegisterLayout { regs })
    }

    /// Concatenation; register names must be disjoint.
    pub fn join(&self, other: &RegisterLayout) -> Result<RegisterLayout, QsimError> {
        let mut out = self.clone();
        for (n, w) in other.registers() {
            out.push(n, w)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_follow_declaration_order() {
        let l = RegisterLayout::new(&[("A", 1), ("B", 4), ("C", 2)]).unwrap();
        assert_eq!(l.width(), 7);
        assert_eq!(l.range("B").unwrap(), 1..5);
        assert_eq!(l.range("C").unwrap(), 5..7);
        assert!(matches!(l.range("D"), Err(QsimError::UnknownRegister(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(RegisterLayout::new(&[("A", 1), ("A", 2)]).is_err());
        let l = RegisterLayout::new(&[("A", 1), ("B", 2)]).unwrap();
        assert!(l.rename("A", "B").is_err());
        assert_eq!(l.without(&["A"]).width(), 2);
    }
}
