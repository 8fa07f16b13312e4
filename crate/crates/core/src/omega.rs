//! Test classes ω paired against both sides.

use std::fmt;
use std::str::FromStr;

use crate::chain::DecoratedChain;
use crate::error::{Error, Result};
use crate::monomial::PsiKappaMonomial;

/// A ψ/κ monomial on `M̄_{g,2}`, or a decorated chain boundary class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TestClass {
    Monomial(PsiKappaMonomial),
    Chain(DecoratedChain),
}

impl TestClass {
    pub fn codim(&self) -> u32 {
        match self {
            TestClass::Monomial(m) => m.codim(),
            TestClass::Chain(c) => c.degree(),
        }
    }

    /// The class as a chain on `M̄_{genus,2}`, scaled by its coefficient.
    pub fn to_chain(&self, genus: u32) -> Result<DecoratedChain> {
        match self {
            TestClass::Monomial(m) => DecoratedChain::from_monomial(genus, m),
            TestClass::Chain(c) if c.genus() == genus => Ok(c.clone()),
            TestClass::Chain(c) => Err(Error::InvalidChain(format!(
                "test class {c} has genus {}, expected {genus}",
                c.genus()
            ))),
        }
    }

    /// Checks `codim = g - 1`, the degree complementary to a codimension
    /// `2g` class on the `(3g-1)`-dimensional space.
    pub fn check_complementary(&self, genus: u32) -> Result<()> {
        let expected = genus.saturating_sub(1);
        if genus == 0 || self.codim() != expected {
            return Err(Error::DegreeMismatch {
                expected,
                found: self.codim(),
            });
        }
        Ok(())
    }
}

impl From<PsiKappaMonomial> for TestClass {
    fn from(m: PsiKappaMonomial) -> Self {
        TestClass::Monomial(m)
    }
}

impl From<DecoratedChain> for TestClass {
    fn from(c: DecoratedChain) -> Self {
        TestClass::Chain(c)
    }
}

impl fmt::Display for TestClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestClass::Monomial(m) => m.fmt(f),
            TestClass::Chain(c) => c.fmt(f),
        }
    }
}

/// Chain syntax if the text contains `[`, monomial syntax otherwise.
impl FromStr for TestClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains('[') {
            Ok(TestClass::Chain(s.parse()?))
        } else {
            Ok(TestClass::Monomial(s.parse()?))
        }
    }
}
