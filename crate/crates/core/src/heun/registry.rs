use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use super::{
    confluent_heun, general_heun, multi_heun, third_order_example, ConfluentHeunParams, HeunError,
    HeunParams, MultiHeunParams, ThirdOrderParams,
};
use crate::ode::LinearOde;
use crate::polymer::{polymer_ode, PolymerOdeParams};

/// A named equation family built from JSON parameters.
pub trait EquationFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, params: &Value) -> Result<LinearOde, HeunError>;
    /// A valid parameter set, shown in help output.
    fn example(&self) -> Value;
}

fn parse<T: DeserializeOwned>(params: &Value) -> Result<T, HeunError> {
    serde_json::from_value(params.clone()).map_err(|e| HeunError::InvalidParams(e.to_string()))
}

struct General;
struct Multi;
struct ThirdOrder;
struct Confluent;
struct Polymer;

impl EquationFamily for General {
    fn name(&self) -> &'static str {
        "general"
    }
    fn summary(&self) -> &'static str {
        "general Heun equation, singular at 0, 1, t, inf"
    }
    fn build(&self, params: &Value) -> Result<LinearOde, HeunError> {
        general_heun(&parse::<HeunParams>(params)?)
    }
    fn example(&self) -> Value {
        json!({"t": "2", "theta1": "1/2", "theta2": "1/2", "theta3": "1/2",
               "theta_inf": "1/4", "alpha": "1/4", "q": "3"})
    }
}

impl EquationFamily for Multi {
    fn name(&self) -> &'static str {
        "multi"
    }
    fn summary(&self) -> &'static str {
        "second-order Fuchsian equation with m finite points and m-2 accessory zeros"
    }
    fn build(&self, params: &Value) -> Result<LinearOde, HeunError> {
        multi_heun(&parse::<MultiHeunParams>(params)?)
    }
    fn example(&self) -> Value {
        json!({"z": ["0", "1", "2", "-1"], "theta": ["1/2", "1/2", "1/2", "1/2"],
               "theta_inf": "1/2", "alpha": "1/2", "q": ["3", "5"]})
    }
}

impl EquationFamily for ThirdOrder {
    fn name(&self) -> &'static str {
        "third-order"
    }
    fn summary(&self) -> &'static str {
        "third-order Fuchsian equation with exponents {0, alpha, beta} at 0"
    }
    fn build(&self, params: &Value) -> Result<LinearOde, HeunError> {
        third_order_example(&parse::<ThirdOrderParams>(params)?)
    }
    fn example(&self) -> Value {
        json!({"t": "3", "alpha": "1/3", "beta": "5/7", "theta2": "-1/2",
               "theta3": "2/5", "kappa": "7/4", "q": "-2"})
    }
}

impl EquationFamily for Confluent {
    fn name(&self) -> &'static str {
        "confluent"
    }
    fn summary(&self) -> &'static str {
        "confluent Heun class: deg P_0 <= 2, deg P_1 = 2, P_2 = alpha (z - q)"
    }
    fn build(&self, params: &Value) -> Result<LinearOde, HeunError> {
        confluent_heun(&parse::<ConfluentHeunParams>(params)?)
    }
    fn example(&self) -> Value {
        json!({"p0": ["0", "-1", "1"], "p1": ["1", "2", "3"], "alpha": "2/3", "q": "5"})
    }
}

impl EquationFamily for Polymer {
    fn name(&self) -> &'static str {
        "polymer"
    }
    fn summary(&self) -> &'static str {
        "polymer stretching spectral equation for given b, W and nu"
    }
    fn build(&self, params: &Value) -> Result<LinearOde, HeunError> {
        let p = parse::<PolymerOdeParams>(params)?;
        polymer_ode(&p.params(), &p.nu).map_err(|e| HeunError::InvalidParams(e.to_string()))
    }
    fn example(&self) -> Value {
        json!({"b": "100", "W": "1/4", "nu": "27"})
    }
}

/// Families looked up by name at runtime.
pub struct FamilyRegistry {
    entries: Vec<Box<dyn EquationFamily>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        let mut r = FamilyRegistry { entries: Vec::new() };
        r.register(Box::new(General));
        r.register(Box::new(Multi));
        r.register(Box::new(ThirdOrder));
        r.register(Box::new(Confluent));
        r.register(Box::new(Polymer));
        r
    }
}

impl FamilyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a family; a later entry with the same name replaces the earlier one.
    pub fn register(&mut self, family: Box<dyn EquationFamily>) {
        self.entries.retain(|f| f.name() != family.name());
        self.entries.push(family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn EquationFamily> {
        self.entries.iter().find(|f| f.name() == name).map(|f| f.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|f| f.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn EquationFamily> {
        self.entries.iter().map(|f| f.as_ref())
    }

    pub fn build(&self, name: &str, params: &Value) -> Result<LinearOde, HeunError> {
        self.get(name)
            .ok_or_else(|| HeunError::UnknownFamily(name.to_string()))?
            .build(params)
    }
}
