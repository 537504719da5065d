use serde::{Deserialize, Serialize};

/// Labels aligned with a graph's canonical edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeLabeling {
    pub labels: Vec<u64>,
}

impl EdgeLabeling {
    pub fn new(labels: Vec<u64>) -> EdgeLabeling {
        EdgeLabeling { labels }
    }

    /// Labels `1..=m` in edge order.
    pub fn sequential(m: usize) -> EdgeLabeling {
        EdgeLabeling { labels: (1..=m as u64).collect() }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// True when the labels are exactly `1..=len` in some order.
    pub fn is_bijection(&self) -> bool {
        let m = self.labels.len();
        let mut seen = vec![false; m + 1];
        for &x in &self.labels {
            let x = x as usize;
            if x == 0 || x > m || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }
}

impl From<Vec<u64>> for EdgeLabeling {
    fn from(labels: Vec<u64>) -> Self {
        EdgeLabeling { labels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bijection() {
        assert!(EdgeLabeling::new(vec![2, 3, 1]).is_bijection());
        assert!(!EdgeLabeling::new(vec![1, 1]).is_bijection());
        assert!(!EdgeLabeling::new(vec![0, 1]).is_bijection());
        assert!(!EdgeLabeling::new(vec![1, 3]).is_bijection());
        assert!(EdgeLabeling::new(vec![]).is_bijection());
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&EdgeLabeling::sequential(3)).unwrap();
        assert_eq!(s, r#"{"labels":[1,2,3]}"#);
    }
}
