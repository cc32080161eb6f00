#ifndef INDSYS_MODEL_HPP
#define INDSYS_MODEL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace indsys {

using Id = std::string;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A cross-reference in the input does not resolve.
struct ReferenceError : Error {
  using Error::Error;
};
// A producer/consumer pair has no usable transport route.
struct ConnectivityError : Error {
  using Error::Error;
};
// A synthesis profile cannot be realized.
struct ProfileError : Error {
  using Error::Error;
};

// Axis-aligned box, millimetres.
struct Box {
  std::int64_t l = 0;
  std::int64_t w = 0;
  std::int64_t h = 0;

  std::int64_t volume() const { return l * w * h; }
  std::array<std::int64_t, 3> dims() const { return {l, w, h}; }
  bool operator==(const Box&) const = default;
};

struct BomEdge {
  Id child;
  int quantity = 1;  // pieces of the child needed per parent
};

struct Part {
  Id id;
  std::string name;
  Box bbox;
  double value_added = 0.0;  // fraction of final-product value, in (0,1)
  std::vector<BomEdge> children;
};

// va_max < 0 means "not set"; the dataset-wide default applies.
struct Country {
  Id id;
  double va_min = 0.0;
  double va_max = -1.0;
};

struct Supplier {
  Id id;
  double va_min = 0.0;
  double va_max = -1.0;
};

struct Site {
  Id id;
  Id country;
};

struct Plant {
  Id id;
  Id site;
  std::vector<Id> producible;
  double production_h = 0.0;  // per-part production duration, 0 when unknown
};

// Unique (supplier, plant) pair. va_max < 0 means "not set".
struct ProductionUnit {
  Id id;
  Id supplier;
  Id plant;
  double va_max = -1.0;
};

struct Warehouse {
  Id id;
  Id site;
  std::vector<Id> nearby_units;
};

struct TransportMean {
  Id id;
  std::string name;
  double co2_g_per_km = 0.0;
  double speed_km_per_h = 0.0;
  double cost_eur_per_km = 0.0;
  Box container;
};

struct LinkAlternative {
  Id mean;
  double distance_km = 0.0;
};

// Directed transport link between two nodes (units or warehouses), offering
// one distance per usable transport mean.
struct MetaLink {
  Id source;
  Id dest;
  std::vector<LinkAlternative> alternatives;
};

struct Bounds {
  double va_c_max_default = 0.1;
  double va_s_max_default = 0.15;
  double va_u_max_default = 0.15;
};

// Immutable world model. `finalize()` resolves all cross-references into
// dense indices and validates structure; afterwards the object is treated as
// read-only and may be shared across worker threads.
struct Dataset {
  std::string schema_version = "indsys-1";
  std::vector<Part> parts;
  std::vector<Country> countries;
  std::vector<Supplier> suppliers;
  std::vector<Site> sites;
  std::vector<Plant> plants;
  std::vector<ProductionUnit> units;
  std::vector<Warehouse> warehouses;
  std::vector<TransportMean> transport_means;
  std::vector<MetaLink> links;
  Id final_product;
  Bounds bounds;

  // --- derived, filled by finalize() ---
  std::map<Id, int> part_index;
  std::map<Id, int> country_index;
  std::map<Id, int> supplier_index;
  std::map<Id, int> site_index;
  std::map<Id, int> plant_index;
  std::map<Id, int> unit_index;
  std::map<Id, int> warehouse_index;
  std::map<Id, int> mean_index;

  int root_part = -1;
  std::vector<int> parent_of;                       // per part, -1 for root
  std::vector<int> quantity_in_parent;              // per part, 1 for root
  std::vector<std::vector<int>> children_of;        // per part
  std::vector<std::int64_t> root_path_quantity;     // product of BOM qtys up to root
  std::vector<std::vector<int>> producers_of;       // per part: capable unit indices
  std::vector<int> unit_country;                    // per unit
  std::vector<int> unit_supplier;                   // per unit
  std::vector<int> unit_plant;                      // per unit
  std::vector<double> unit_va_max;                  // per unit, defaults applied
  std::vector<double> country_va_max;
  std::vector<double> supplier_va_max;
  std::vector<std::vector<int>> warehouse_nearby;   // per warehouse: unit indices, sorted

  int n_parts() const { return static_cast<int>(parts.size()); }
  int n_units() const { return static_cast<int>(units.size()); }
  int n_warehouses() const { return static_cast<int>(warehouses.size()); }

  // Resolves indices and checks structural invariants (unique ids, resolvable
  // references, positive dimensions/rates, BOM forms a tree rooted at
  // final_product, unique (supplier, plant) pairs). Throws ReferenceError or
  // Error on the first defect found.
  void finalize();
};

enum class Sourcing { kSingle, kDouble };

const char* to_string(Sourcing s);
Sourcing sourcing_from_string(const std::string& s);

struct UnitShare {
  int unit = -1;     // index into dataset.units
  double share = 0;  // fraction of the part's production
  bool operator==(const UnitShare&) const = default;
};

// Output of Phase I decoding: per part, the producing units and their shares.
// Parts that could not be placed have an empty entry.
struct ProductionAssignment {
  Sourcing mode = Sourcing::kSingle;
  int fal_count = 1;  // parallel final-assembly units in single mode
  std::vector<std::vector<UnitShare>> per_part;

  bool placed(int part) const { return !per_part[part].empty(); }
  int placed_count() const;
};

struct ValueAddedRollup {
  std::vector<double> per_country;
  std::vector<double> per_supplier;
  std::vector<double> per_unit;
};

// Share-weighted value-added aggregation: a part split a:(1-a) contributes
// a*va to the first unit and (1-a)*va to the second.
ValueAddedRollup aggregate_value_added(const ProductionAssignment& assignment,
                                       const Dataset& dataset);

struct ConstraintViolation {
  int constraint = 0;   // 1..6
  Id subject;
  double observed = 0;
  double bound = 0;
  std::string message;
};

// Checks Constraints 1-6 on an assignment (possibly partial). Violations are
// returned as data; an empty result means the assignment is valid.
std::vector<ConstraintViolation> check_constraints(const ProductionAssignment& assignment,
                                                   const Dataset& dataset);

}  // namespace indsys

#endif  // INDSYS_MODEL_HPP
