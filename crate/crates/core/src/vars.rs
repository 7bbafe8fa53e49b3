//! Variable declarations: named groups with arities, e.g. `z:2 w:2`.
//!
//! Group `z` of arity 2 declares the variables `z1, z2`. Positions are
//! assigned in declaration order, so `z:2 w:2` is `(z1, z2, w1, w2)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarDeclError {
    #[error("bad variable group `{0}`: expected name:arity")]
    Malformed(String),
    #[error("bad variable name `{0}`: names are ASCII letters, not `i`")]
    BadName(String),
    #[error("duplicate variable group `{0}`")]
    Duplicate(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarDecl {
    groups: Vec<(String, usize)>,
}

impl VarDecl {
    pub fn new(groups: &[(&str, usize)]) -> Result<Self, VarDeclError> {
        let mut out = Self { groups: Vec::new() };
        for &(name, arity) in groups {
            out.push(name, arity)?;
        }
        Ok(out)
    }

    fn push(&mut self, name: &str, arity: usize) -> Result<(), VarDeclError> {
        if name.is_empty() || !name.bytes().all(|b| b.is_ascii_alphabetic()) || name == "i" {
            return Err(VarDeclError::BadName(name.to_string()));
        }
        if self.groups.iter().any(|(g, _)| g == name) {
            return Err(VarDeclError::Duplicate(name.to_string()));
        }
        if arity > 0 {
            self.groups.push((name.to_string(), arity));
        }
        Ok(())
    }

    /// Parses `z:2,w:2` or `z:2 w:2`.
    pub fn parse(text: &str) -> Result<Self, VarDeclError> {
        let mut out = Self { groups: Vec::new() };
        for part in text.split(|c: char| c == ',' || c.is_ascii_whitespace()) {
            if part.is_empty() {
                continue;
            }
            let (name, arity) = part.split_once(':').ok_or_else(|| VarDeclError::Malformed(part.to_string()))?;
            if arity.is_empty() || !arity.bytes().all(|b| b.is_ascii_digit()) {
                return Err(VarDeclError::Malformed(part.to_string()));
            }
            let arity: usize = arity.parse().map_err(|_| VarDeclError::Malformed(part.to_string()))?;
            out.push(name, arity)?;
        }
        Ok(out)
    }

    /// `x:n`, for series without meaningful names.
    pub fn anonymous(n: usize) -> Self {
        Self { groups: if n == 0 { vec![] } else { vec![("x".to_string(), n)] } }
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(|(_, a)| a).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn groups(&self) -> &[(String, usize)] {
        &self.groups
    }

    /// Name of the variable at `pos`, e.g. `w1`.
    pub fn name(&self, mut pos: usize) -> String {
        for (g, a) in &self.groups {
            if pos < *a {
                return format!("{g}{}", pos + 1);
            }
            pos -= a;
        }
        format!("x{}", pos + 1)
    }

    /// Position of the variable spelled `name` + `index` (1-based index).
    pub fn resolve(&self, name: &str, index: usize) -> Option<usize> {
        let mut offset = 0;
        for (g, a) in &self.groups {
            if g == name {
                return (index >= 1 && index <= *a).then(|| offset + index - 1);
            }
            offset += a;
        }
        None
    }
}

impl fmt::Display for VarDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().map(|(g, a)| format!("{g}:{a}")).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for VarDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarDecl({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_names() {
        let d = VarDecl::parse("z:2,w:2").unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.name(2), "w1");
        assert_eq!(d.resolve("w", 2), Some(3));
        assert_eq!(d.resolve("w", 3), None);
        assert_eq!(d.resolve("q", 1), None);
        assert_eq!(d.to_string(), "z:2 w:2");
        assert_eq!(VarDecl::parse("z:2 w:2").unwrap(), d);
    }

    #[test]
    fn rejects_bad_groups() {
        assert!(matches!(VarDecl::parse("i:2"), Err(VarDeclError::BadName(_))));
        assert!(matches!(VarDecl::parse("z1:2"), Err(VarDeclError::BadName(_))));
        assert!(matches!(VarDecl::parse("zé:2"), Err(VarDeclError::BadName(_))));
        assert!(matches!(VarDecl::parse("z:2,z:1"), Err(VarDeclError::Duplicate(_))));
        assert!(matches!(VarDecl::parse("z"), Err(VarDeclError::Malformed(_))));
        assert!(matches!(VarDecl::parse("z:-1"), Err(VarDeclError::Malformed(_))));
    }
}
