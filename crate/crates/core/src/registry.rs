//! Name-keyed registries of interchangeable strategies.

/// Strategies of one family, looked up by name at run time.
pub struct Registry<T: ?Sized> {
    entries: Vec<(&'static str, Box<T>)>,
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Registry {
            entries: Vec::new(),
        }
    }
}

impl<T: ?Sized> Registry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a strategy; a later registration under the same name replaces the earlier one.
    pub fn register(&mut self, name: &'static str, strategy: Box<T>) {
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = strategy,
            None => self.entries.push((name, strategy)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, s)| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &T)> {
        self.entries.iter().map(|(n, s)| (*n, s.as_ref()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Shape {
        fn sides(&self) -> u32;
    }
    struct Tri;
    struct Sq;
    impl Shape for Tri {
        fn sides(&self) -> u32 {
            3
        }
    }
    impl Shape for Sq {
        fn sides(&self) -> u32 {
            4
        }
    }

    #[test]
    fn lookup_and_replace() {
        let mut r: Registry<dyn Shape> = Registry::new();
        r.register("tri", Box::new(Tri));
        r.register("sq", Box::new(Tri));
        r.register("sq", Box::new(Sq));
        assert_eq!(r.names(), vec!["tri", "sq"]);
        assert_eq!(r.get("SQ").unwrap().sides(), 4);
        assert!(r.get("pent").is_none());
    }
}
