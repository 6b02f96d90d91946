//! Packaged experiment configurations.

use super::{ExperimentConfig, LabError};

const PRESETS: &[(&str, &str)] = &[
    (
        "schanuel-p1",
        include_str!("../../presets/schanuel-p1.toml"),
    ),
    (
        "schanuel-p2",
        include_str!("../../presets/schanuel-p2.toml"),
    ),
    (
        "restriction-check",
        include_str!("../../presets/restriction-check.toml"),
    ),
    (
        "tamagawa-gaussian",
        include_str!("../../presets/tamagawa-gaussian.toml"),
    ),
    ("bt", include_str!("../../presets/bt.toml")),
];

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.0).collect()
}

pub fn source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.0 == name).map(|p| p.1)
}

pub fn load(name: &str) -> Result<ExperimentConfig, LabError> {
    let text = source(name).ok_or_else(|| {
        LabError::Config(format!(
            "unknown preset {name:?}; available: {}",
            names().join(", ")
        ))
    })?;
    ExperimentConfig::from_toml_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        for n in names() {
            let c = load(n).unwrap();
            let again = ExperimentConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap();
            assert_eq!(c, again, "{n}");
        }
        assert!(load("nope").is_err());
    }
}
