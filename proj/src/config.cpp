#include "mlmq/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlmq/error.hpp"

namespace mlmq {

std::string_view to_string(L1Type t) {
  switch (t) {
    case L1Type::kVector: return "vector";
    case L1Type::kNearFar: return "near_far";
    case L1Type::kFilter: return "filter";
    case L1Type::kSlf: return "slf";
  }
  return "?";
}

std::string_view to_string(L2Type t) {
  switch (t) {
    case L2Type::kFifo: return "fifo";
    case L2Type::kBucket: return "bucket";
    case L2Type::kPriority: return "priority";
    case L2Type::kMulti: return "multi";
  }
  return "?";
}

L1Type parse_l1_type(std::string_view s) {
  if (s == "vector") return L1Type::kVector;
  if (s == "near_far" || s == "nearfar" || s == "nf") return L1Type::kNearFar;
  if (s == "filter") return L1Type::kFilter;
  if (s == "slf") return L1Type::kSlf;
  throw Error(ErrorKind::kInvalidParameter,
              "unknown L1 queue type '" + std::string(s) + "'");
}

L2Type parse_l2_type(std::string_view s) {
  if (s == "fifo" || s == "vector") return L2Type::kFifo;
  if (s == "bucket") return L2Type::kBucket;
  if (s == "priority" || s == "pq") return L2Type::kPriority;
  if (s == "multi") return L2Type::kMulti;
  throw Error(ErrorKind::kInvalidParameter,
              "unknown L2 queue type '" + std::string(s) + "'");
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kInvalidParameter, what);
}

Distance scaled(double factor, double avg_weight) {
  return std::max<Distance>(1, static_cast<Distance>(std::llround(factor * avg_weight)));
}

}  // namespace

void MlmqConfig::validate() const {
  require(l0_capacity >= 1, "l0_capacity must be >= 1");
  require(l1.capacity >= 1, "l1 capacity must be >= 1");
  require(lanes_per_group >= 1, "lanes_per_group must be >= 1");
  require(num_groups >= 1, "num_groups must be >= 1");
  require(l2.block_size >= 1, "block_size must be >= 1");
  require(l2.block_num >= 1, "block_num must be >= 1");
  require(l2.bmax >= 1, "bmax must be >= 1");
  require(l2.bnum >= 1, "bnum must be >= 1");
  require(l2.bnum <= l2.bmax, "bnum must not exceed bmax");
  require(l2.node_batch >= 1, "node_batch must be >= 1");
  require(l1.delta_nf_factor >= 0.0, "delta_nf factor must be >= 0");
  require(l1.filter_factor >= 0.0, "filter factor must be >= 0");
  require(l2.delta_factor > 0.0 || l2.delta > 0, "bucket width must be positive");
  if (l2_type == L2Type::kMulti && l2.pnum != 0)
    require(l2.pnum <= num_groups,
            "pnum must not exceed num_groups (every queue needs a reader)");
}

std::string MlmqConfig::label() const {
  std::ostringstream os;
  switch (l1_type) {
    case L1Type::kVector:
      os << "L1V(wb=" << l1.wb << ")";
      break;
    case L1Type::kNearFar:
      os << "L1NF(";
      if (l1.delta_nf) os << "d=" << l1.delta_nf;
      else os << "f=" << l1.delta_nf_factor;
      os << ")";
      break;
    case L1Type::kFilter:
      os << "L1FQ(";
      if (l1.filter_window) os << "w=" << l1.filter_window;
      else os << "f=" << l1.filter_factor;
      os << ")";
      break;
    case L1Type::kSlf:
      os << "L1SLF";
      break;
  }
  os << "-";
  switch (l2_type) {
    case L2Type::kFifo:
      os << "L2V";
      break;
    case L2Type::kBucket:
      os << "L2DQ(";
      if (l2.delta) os << "d=" << l2.delta;
      else os << "f=" << l2.delta_factor;
      os << ",bmax=" << l2.bmax << ",bnum=" << l2.bnum << ")";
      break;
    case L2Type::kPriority:
      os << "L2PQ(B=" << l2.node_batch << ")";
      break;
    case L2Type::kMulti:
      os << "L2MPQ(B=" << l2.node_batch << ",p=" << l2.pnum << ")";
      break;
  }
  return os.str();
}

MlmqConfig resolve(const MlmqConfig& cfg, double avg_weight,
                   std::size_t num_vertices) {
  MlmqConfig out = cfg;
  if (avg_weight <= 0.0) avg_weight = 1.0;
  if (out.l2.delta == 0) out.l2.delta = scaled(out.l2.delta_factor, avg_weight);
  if (out.l1.delta_nf == 0) {
    if (out.l1.delta_nf_factor > 0.0)
      out.l1.delta_nf = scaled(out.l1.delta_nf_factor, avg_weight);
    else if (out.l2_type == L2Type::kBucket)
      out.l1.delta_nf = out.l2.delta;
    else
      out.l1.delta_nf = scaled(1.0, avg_weight);
  }
  if (out.l1.filter_window == 0)
    out.l1.filter_window = scaled(out.l1.filter_factor, avg_weight);
  if (out.l2.pnum == 0) out.l2.pnum = std::max<std::uint32_t>(1, out.num_groups / 4);
  if (out.l2.node_capacity == 0) {
    const std::size_t want = std::max<std::size_t>(4096, 4 * num_vertices);
    out.l2.node_capacity = static_cast<std::uint32_t>(std::min<std::size_t>(want, 1u << 20));
  }
  return out;
}

nlohmann::json to_json(const MlmqConfig& c) {
  return nlohmann::json{
      {"label", c.label()},
      {"l0_capacity", c.l0_capacity},
      {"l1_type", to_string(c.l1_type)},
      {"l1",
       {{"capacity", c.l1.capacity},
        {"wb", c.l1.wb},
        {"delta_nf", c.l1.delta_nf},
        {"delta_nf_factor", c.l1.delta_nf_factor},
        {"filter_window", c.l1.filter_window},
        {"filter_factor", c.l1.filter_factor}}},
      {"l2_type", to_string(c.l2_type)},
      {"l2",
       {{"block_size", c.l2.block_size},
        {"block_num", c.l2.block_num},
        {"delta", c.l2.delta},
        {"delta_factor", c.l2.delta_factor},
        {"bmax", c.l2.bmax},
        {"bnum", c.l2.bnum},
        {"node_batch", c.l2.node_batch},
        {"node_capacity", c.l2.node_capacity},
        {"pnum", c.l2.pnum}}},
      {"num_groups", c.num_groups},
      {"lanes_per_group", c.lanes_per_group},
      {"th_v", c.th_v},
  };
}

MlmqConfig config_from_json(const nlohmann::json& j) {
  MlmqConfig c;
  c.l0_capacity = j.value("l0_capacity", c.l0_capacity);
  if (j.contains("l1_type")) c.l1_type = parse_l1_type(j.at("l1_type").get<std::string>());
  if (j.contains("l1")) {
    const auto& a = j.at("l1");
    c.l1.capacity = a.value("capacity", c.l1.capacity);
    c.l1.wb = a.value("wb", c.l1.wb);
    c.l1.delta_nf = a.value("delta_nf", c.l1.delta_nf);
    c.l1.delta_nf_factor = a.value("delta_nf_factor", c.l1.delta_nf_factor);
    c.l1.filter_window = a.value("filter_window", c.l1.filter_window);
    c.l1.filter_factor = a.value("filter_factor", c.l1.filter_factor);
  }
  if (j.contains("l2_type")) c.l2_type = parse_l2_type(j.at("l2_type").get<std::string>());
  if (j.contains("l2")) {
    const auto& b = j.at("l2");
    c.l2.block_size = b.value("block_size", c.l2.block_size);
    c.l2.block_num = b.value("block_num", c.l2.block_num);
    c.l2.delta = b.value("delta", c.l2.delta);
    c.l2.delta_factor = b.value("delta_factor", c.l2.delta_factor);
    c.l2.bmax = b.value("bmax", c.l2.bmax);
    c.l2.bnum = b.value("bnum", c.l2.bnum);
    c.l2.node_batch = b.value("node_batch", c.l2.node_batch);
    c.l2.node_capacity = b.value("node_capacity", c.l2.node_capacity);
    c.l2.pnum = b.value("pnum", c.l2.pnum);
  }
  c.num_groups = j.value("num_groups", c.num_groups);
  c.lanes_per_group = j.value("lanes_per_group", c.lanes_per_group);
  c.th_v = j.value("th_v", c.th_v);
  return c;
}

}  // namespace mlmq
