mod common;

use common::*;
use skeleta::different_fn::solve_different;
use skeleta::io::{self, read_skeleton, write_skeleton};
use std::collections::BTreeMap;
use std::fs;

#[test]
fn shipped_fixtures_match_builders() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, skeleton) in shipped_skeletons() {
        let fresh = tmp.path().join(&name);
        for path in write_skeleton(&fresh, &skeleton).unwrap() {
            let shipped = fixtures_dir().join(&name).join(path.file_name().unwrap());
            check_file(&shipped, &fs::read_to_string(&path).unwrap());
        }
    }
    check_file(
        &fixtures_dir().join("p1-interval.json"),
        &io::serialize_graph(&p1_interval()),
    );
}

#[test]
fn shipped_fixtures_round_trip_and_pass_audit() {
    for (name, _) in shipped_skeletons() {
        let dir = fixtures_dir().join(&name);
        for file in [io::BASE_FILE, io::TOTAL_FILE] {
            let text = fs::read_to_string(dir.join(file)).unwrap();
            assert_eq!(
                io::serialize_graph(&io::parse_graph(&text).unwrap()),
                text,
                "{name}/{file}"
            );
        }
        let cover_text = fs::read_to_string(dir.join(io::COVER_FILE)).unwrap();
        let cover = io::parse_cover(&cover_text, Some(&dir)).unwrap();
        assert_eq!(
            io::serialize_cover(&cover, Some((io::BASE_FILE, io::TOTAL_FILE))),
            cover_text
        );
        let delta_text = fs::read_to_string(dir.join(io::DIFFERENT_FILE)).unwrap();
        let delta = io::parse_function(&delta_text, cover.total()).unwrap();
        assert_eq!(io::serialize_function(&delta), delta_text);

        let skeleton = read_skeleton(&dir).unwrap();
        assert_eq!(
            io::serialize_skeleton_meta(&skeleton),
            fs::read_to_string(dir.join(io::SKELETON_FILE)).unwrap()
        );
        let audit = skeleton.audit().unwrap();
        assert!(audit.passed(), "{name}: {audit:?}");
    }
}

#[test]
fn solve_different_recovers_every_fixture() {
    for (name, s) in shipped_skeletons() {
        let total = s.cover.total();
        // A single anchor pins the constant; leaves alone also suffice.
        let first = total.vertex_ids().next().unwrap();
        let single: BTreeMap<_, _> =
            [(first.to_string(), s.different.value(first).unwrap().clone())].into();
        assert_eq!(
            solve_different(&s.cover, &single).unwrap(),
            s.different,
            "{name}"
        );
        let leaves: BTreeMap<_, _> = total
            .vertices()
            .iter()
            .enumerate()
            .filter(|(i, _)| total.valency(*i) == 1)
            .map(|(_, v)| (v.id.clone(), s.different.value(&v.id).unwrap().clone()))
            .collect();
        assert_eq!(
            solve_different(&s.cover, &leaves).unwrap(),
            s.different,
            "{name}"
        );
    }
}
