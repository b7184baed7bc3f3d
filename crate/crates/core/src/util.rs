//! Serde helpers.

/// Serializes a map keyed by bidegree as a list of `{n1, n2, value}`
/// records, since JSON object keys must be strings.
pub mod bidegree_map {
    use std::collections::BTreeMap;

    use serde::de::DeserializeOwned;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry<V> {
        n1: i64,
        n2: i64,
        value: V,
    }

    pub fn serialize<S, V>(map: &BTreeMap<(i64, i64), V>, s: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        V: Serialize + Clone,
    {
        let v: Vec<Entry<V>> = map
            .iter()
            .map(|(&(n1, n2), value)| Entry {
                n1,
                n2,
                value: value.clone(),
            })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D, V>(d: D) -> Result<BTreeMap<(i64, i64), V>, D::Error>
    where
        D: Deserializer<'de>,
        V: DeserializeOwned,
    {
        let v: Vec<Entry<V>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|e| ((e.n1, e.n2), e.value)).collect())
    }
}

/// Serializes exact rational coefficients keyed by `(i1, i2)` as a list of
/// `{i1, i2, value}` with `value` an exact `"p/q"` string.
pub mod rational_coeffs {
    use std::collections::BTreeMap;
    use std::str::FromStr;

    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        i1: u32,
        i2: u32,
        value: String,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(u32, u32), BigRational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> = map
            .iter()
            .map(|(&(i1, i2), c)| Entry {
                i1,
                i2,
                value: c.to_string(),
            })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(u32, u32), BigRational>, D::Error> {
        let v: Vec<Entry> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|e| {
                BigRational::from_str(&e.value)
                    .map(|c| ((e.i1, e.i2), c))
                    .map_err(D::Error::custom)
            })
            .collect()
    }
}
