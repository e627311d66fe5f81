use crate::error::ForestError;

/// A finite feature vector of fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, ForestError> {
        validate(&coords)?;
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn validate(coords: &[f64]) -> Result<(), ForestError> {
    if coords.is_empty() {
        return Err(ForestError::EmptyPoint);
    }
    match coords.iter().position(|v| !v.is_finite()) {
        Some(position) => Err(ForestError::NonFiniteCoordinate {
            position,
            value: coords[position],
        }),
        None => Ok(()),
    }
}

/// Axis-aligned box `lower[i] <= x[i] <= upper[i]`. Zero-width sides are
/// allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperrectangle {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Hyperrectangle {
    /// Panics if the bounds differ in length or are out of order.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "bound dimensions differ");
        assert!(
            lower.iter().zip(&upper).all(|(l, u)| l <= u),
            "lower bound exceeds upper bound"
        );
        Self { lower, upper }
    }

    /// Degenerate box at `x`.
    pub fn point(x: &[f64]) -> Self {
        Self {
            lower: x.to_vec(),
            upper: x.to_vec(),
        }
    }

    /// Minimal box enclosing `points`, or `None` if there are none.
    pub fn enclosing<'a, I>(points: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = points.into_iter();
        let mut hull = Self::point(iter.next()?);
        for x in iter {
            hull.expand(x);
        }
        Some(hull)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn expand(&mut self, x: &[f64]) {
        for ((l, u), &v) in self.lower.iter_mut().zip(self.upper.iter_mut()).zip(x) {
            if v < *l {
                *l = v;
            }
            if v > *u {
                *u = v;
            }
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut hull = self.clone();
        for i in 0..hull.dim() {
            hull.lower[i] = hull.lower[i].min(other.lower[i]);
            hull.upper[i] = hull.upper[i].max(other.upper[i]);
        }
        hull
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.lower
            .iter()
            .zip(&self.upper)
            .zip(x)
            .all(|((l, u), v)| l <= v && v <= u)
    }

    pub fn contains_box(&self, other: &Self) -> bool {
        self.contains(&other.lower) && self.contains(&other.upper)
    }
}

/// Hull of two optional supports; an absent side contributes nothing.
pub(crate) fn hull(
    a: Option<&Hyperrectangle>,
    b: Option<&Hyperrectangle>,
) -> Option<Hyperrectangle> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.union(b)),
        (Some(a), None) => Some(a.clone()),
        (None, Some(b)) => Some(b.clone()),
        (None, None) => None,
    }
}
