#![no_main]

use libfuzzer_sys::fuzz_target;
use unruh_gas::sweep::Grid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(grid) = Grid::parse(text) {
        let points = grid.points();
        assert_eq!(points.len(), grid.count);
        assert_eq!(points[0], grid.start);
        assert_eq!(points[grid.count - 1], grid.stop);
    }
});
