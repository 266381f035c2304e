//! Surface files shipped with the crate, available by name without a path.

pub const FILES: &[(&str, &str)] = &[
    ("cubic_pencil.json", include_str!("../corpus/cubic_pencil.json")),
    ("dp1.json", include_str!("../corpus/dp1.json")),
    ("dp2.json", include_str!("../corpus/dp2.json")),
    ("dp3.json", include_str!("../corpus/dp3.json")),
    ("dp4.json", include_str!("../corpus/dp4.json")),
    ("dp5.json", include_str!("../corpus/dp5.json")),
    ("dp6.json", include_str!("../corpus/dp6.json")),
    ("dp7.json", include_str!("../corpus/dp7.json")),
    ("dp8.json", include_str!("../corpus/dp8.json")),
    ("e8_extremal.json", include_str!("../corpus/e8_extremal.json")),
    ("f0.json", include_str!("../corpus/f0.json")),
    ("f2.json", include_str!("../corpus/f2.json")),
    ("four_a2_extremal.json", include_str!("../corpus/four_a2_extremal.json")),
    ("k3_quartic.json", include_str!("../corpus/k3_quartic.json")),
    ("p2.json", include_str!("../corpus/p2.json")),
    ("quartic_blowup.json", include_str!("../corpus/quartic_blowup.json")),
    ("tower_depth1.json", include_str!("../corpus/tower_depth1.json")),
    ("tower_depth2.json", include_str!("../corpus/tower_depth2.json")),
    ("tower_depth3.json", include_str!("../corpus/tower_depth3.json")),
    ("tower_depth4.json", include_str!("../corpus/tower_depth4.json")),
    ("unknown-kappa.json", include_str!("../corpus/unknown-kappa.json")),
];

/// Contents of a corpus file, by file name with or without `.json`.
pub fn get(name: &str) -> Option<&'static str> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    FILES
        .iter()
        .find(|(n, _)| n.strip_suffix(".json") == Some(key))
        .map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}
