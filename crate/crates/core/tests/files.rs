use std::fs;
use std::path::PathBuf;

use optimin_core::decisions::optimin_acts;
use optimin_core::generators::{named_game, named_tu, NamedTag};
use optimin_core::io;
use optimin_core::matching::optimin_matchings;
use optimin_core::noncoop::optimin_pure;

fn data(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    fs::read_to_string(path).unwrap()
}

#[test]
fn named_instances_round_trip() {
    for tag in NamedTag::ALL {
        if let Ok(game) = named_game(tag) {
            let text = io::write_game(&game);
            let back = io::parse_game(&text).unwrap();
            assert_eq!(back, game, "{tag}");
            assert_eq!(io::write_game(&back), text);
            assert_eq!(optimin_pure(&back), optimin_pure(&game));
        }
        if let Ok(game) = named_tu(tag) {
            let text = io::write_tu(&game);
            assert_eq!(io::write_tu(&io::parse_tu(&text).unwrap()), text, "{tag}");
        }
    }
}

#[test]
fn sample_marriage_file() {
    let problem = io::parse_marriage(&data("marriage.json")).unwrap();
    let text = io::write_marriage(&problem);
    assert_eq!(io::write_marriage(&io::parse_marriage(&text).unwrap()), text);
    assert_eq!(optimin_matchings(&problem).unwrap().len(), 2);
}

#[test]
fn sample_decision_file() {
    let file = io::parse_decision(&data("mortgage.json")).unwrap();
    let text = io::write_decision(&file);
    assert_eq!(io::write_decision(&io::parse_decision(&text).unwrap()), text);
    let result = optimin_acts(&file.problem, &file.oc).unwrap();
    let buy = file.problem.acts().iter().position(|a| a == "buy").unwrap();
    assert_eq!(result.acts(), vec![buy]);
    assert!(result.profiles.iter().all(|(_, v)| v.nature.is_none()));
}
