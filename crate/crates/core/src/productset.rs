//! Product sets `B·B = {ab : a, b ∈ B}` with factor-pair provenance.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::Natural;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("base set is empty")]
    Empty,
    #[error("element {0} is not positive")]
    NotPositive(alloc::string::String),
    #[error("element {0} appears twice")]
    Duplicate(alloc::string::String),
    #[error("product {0} * {1} overflows the element type")]
    Overflow(alloc::string::String, alloc::string::String),
}

/// Exact positive numbers that can populate a base set.
pub trait Element: Clone + Ord + fmt::Debug + fmt::Display {
    fn is_positive(&self) -> bool;
    /// `None` on overflow.
    fn checked_product(&self, other: &Self) -> Option<Self>;
    /// `Some` iff the value is a positive integer.
    fn to_natural(&self) -> Option<Natural>;
}

impl Element for u64 {
    fn is_positive(&self) -> bool {
        *self > 0
    }

    fn checked_product(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }

    fn to_natural(&self) -> Option<Natural> {
        (*self > 0).then(|| Natural::from(*self))
    }
}

impl Element for Natural {
    fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    fn checked_product(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }

    fn to_natural(&self) -> Option<Natural> {
        (!self.is_zero()).then(|| self.clone())
    }
}

impl Element for BigRational {
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn checked_product(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }

    fn to_natural(&self) -> Option<Natural> {
        if self.is_integer() && Signed::is_positive(self) {
            self.to_integer().to_biguint()
        } else {
            None
        }
    }
}

/// A finite set of distinct positive numbers, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSet<T> {
    elements: Vec<T>,
}

impl<T: Element> BaseSet<T> {
    pub fn new<I: IntoIterator<Item = T>>(items: I) -> Result<Self, ProductError> {
        let mut elements: Vec<T> = items.into_iter().collect();
        if let Some(bad) = elements.iter().find(|e| !e.is_positive()) {
            return Err(ProductError::NotPositive(alloc::format!("{bad}")));
        }
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(ProductError::Duplicate(alloc::format!("{}", w[0])));
        }
        Ok(BaseSet { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.elements
    }

    pub fn get(&self, index: usize) -> Option<&T> {
        self.elements.get(index)
    }

    pub fn position(&self, value: &T) -> Option<usize> {
        self.elements.binary_search(value).ok()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, T> {
        self.elements.iter()
    }
}

impl BaseSet<u64> {
    pub fn from_u64s(values: &[u64]) -> Result<Self, ProductError> {
        BaseSet::new(values.iter().copied())
    }
}

impl<T: fmt::Display> fmt::Display for BaseSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// An unordered factor pair `{b₁, b₂}` stored as base-set indices `i <= j`.
pub type IndexPair = (usize, usize);

/// `B·B` together with every way each product arises.
#[derive(Debug, Clone)]
pub struct ProductSet<T> {
    base: BaseSet<T>,
    products: BTreeMap<T, Vec<IndexPair>>,
}

/// Builds `B·B`, squares included. Pairs under each value are in ascending
/// `(i, j)` order, which is ascending `(b₁, b₂)` order.
pub fn build_product_set<T: Element>(base: &BaseSet<T>) -> Result<ProductSet<T>, ProductError> {
    if base.is_empty() {
        return Err(ProductError::Empty);
    }
    let b = base.as_slice();
    let mut products: BTreeMap<T, Vec<IndexPair>> = BTreeMap::new();
    for i in 0..b.len() {
        for j in i..b.len() {
            let v = b[i].checked_product(&b[j]).ok_or_else(|| {
                ProductError::Overflow(alloc::format!("{}", b[i]), alloc::format!("{}", b[j]))
            })?;
            products.entry(v).or_default().push((i, j));
        }
    }
    Ok(ProductSet {
        base: base.clone(),
        products,
    })
}

impl<T: Element> ProductSet<T> {
    pub fn base(&self) -> &BaseSet<T> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }

    pub fn contains(&self, value: &T) -> bool {
        self.products.contains_key(value)
    }

    pub fn values(&self) -> impl Iterator<Item = &T> + '_ {
        self.products.keys()
    }

    pub fn index_pairs(&self, value: &T) -> Option<&[IndexPair]> {
        self.products.get(value).map(Vec::as_slice)
    }

    /// Factor pairs of `value` as element references.
    pub fn pairs<'a>(&'a self, value: &T) -> impl Iterator<Item = (&'a T, &'a T)> + 'a {
        let b = self.base.as_slice();
        self.products
            .get(value)
            .into_iter()
            .flatten()
            .map(move |&(i, j)| (&b[i], &b[j]))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &[IndexPair])> + '_ {
        self.products.iter().map(|(v, p)| (v, p.as_slice()))
    }

    /// Largest product that is a positive integer.
    pub fn max_natural(&self) -> Option<Natural> {
        self.products.keys().filter_map(Element::to_natural).max()
    }
}

/// A product-set value recognised as a sequence term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member<T> {
    pub value: T,
    pub index: u64,
    pub pairs: Vec<IndexPair>,
}

/// Values of `ps` accepted by `membership`, ascending by value. Non-integer
/// values are never members.
pub fn sequence_members<T, F>(ps: &ProductSet<T>, membership: F) -> Vec<Member<T>>
where
    T: Element,
    F: Fn(&Natural) -> Option<u64>,
{
    ps.products
        .iter()
        .filter_map(|(v, pairs)| {
            let n = v.to_natural()?;
            let index = membership(&n)?;
            Some(Member {
                value: v.clone(),
                index,
                pairs: pairs.clone(),
            })
        })
        .collect()
}
