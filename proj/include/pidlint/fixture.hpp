#pragma once

#include <string>

#include "pidlint/graph.hpp"

namespace pidlint {

// Case-study plant: feed pump P4711, preheater H1007, central vessel T4750,
// discharge pump P4712 with a temperature-controlled recycle through H1008.
// 33 components, 36 pipes and signals. The vessel has no level instrument and
// neither pump has a strainer, check valve, block valves or drains. The only
// globe control valve (TCV4750) sits on a DN 50 line.
inline PidGraph build_case_study_fixture() {
  PidGraph g;
  g.metadata()["title"] = "Case study: pump-vessel-recycle unit";
  g.metadata()["milestone"] = "issue for review";
  g.metadata()["source"] = "built-in fixture";

  auto node = [&](const std::string& id, const std::string& cls, bool tagged = true,
                  AttributeMap attrs = {}) {
    PidNode n{id, cls, std::nullopt, std::move(attrs)};
    if (tagged) n.tag = id;
    g.add_node(std::move(n));
  };
  auto pipe = [&](const std::string& id, const std::string& from, const std::string& to,
                  std::int64_t dn) {
    g.add_edge({id, from, to, EdgeKind::pipe, {{"nominalDiameterDN", Value{dn}}}});
  };
  auto signal = [&](const std::string& id, const std::string& from, const std::string& to) {
    g.add_edge({id, from, to, EdgeKind::signal, {}});
  };

  node("OPC-FEED", "PipeOffPageConnector", false);
  node("P4711", "CentrifugalPump", true, {{"designFlowM3h", Value{std::int64_t{25}}}});
  node("PI4711", "PressureInstrument");
  node("H1007", "HeatExchanger", true, {{"service", Value{std::string("feed preheater")}}});
  node("TI1007", "TemperatureInstrument");
  node("OPC-HM-IN", "PipeOffPageConnector", false);
  node("HV1007", "GateValve");
  node("OPC-HM-OUT", "PipeOffPageConnector", false);
  node("T4750", "Vessel", true, {{"volumeM3", Value{12.5}}});
  node("PT4750", "PressureInstrument");
  node("PIC4750", "PressureInstrument");
  node("PCV4750-A", "Actuator", false);
  node("PCV4750", "ButterflyValve");
  node("OPC-VENT", "PipeOffPageConnector", false);
  node("TT4750", "TemperatureInstrument");
  node("TIC4750", "TemperatureInstrument");
  node("TCV4750-A", "Actuator", false);
  node("TCV4750", "GlobeValve");
  node("P4712", "ReciprocatingPump", true, {{"designFlowM3h", Value{std::int64_t{18}}}});
  node("PI4712", "PressureInstrument");
  node("HV4712", "BallValve");
  node("OPC-PRODUCT", "PipeOffPageConnector", false);
  node("FT4712", "FlowInstrument");
  node("FIC4712", "FlowInstrument");
  node("H1008", "HeatExchanger", true, {{"service", Value{std::string("recycle cooler")}}});
  node("OPC-CW-IN", "PipeOffPageConnector", false);
  node("HV1008", "GateValve");
  node("OPC-CW-OUT", "PipeOffPageConnector", false);
  node("TI1008", "TemperatureInstrument");
  node("PI1008", "PressureInstrument");
  node("PSV4750", "SafetyValve");
  node("OPC-FLARE", "PipeOffPageConnector", false);
  node("PI4750", "PressureInstrument");

  pipe("L01", "OPC-FEED", "P4711", 80);
  pipe("L02", "P4711", "H1007", 80);
  pipe("L03", "H1007", "T4750", 80);
  pipe("L04", "OPC-HM-IN", "HV1007", 50);
  pipe("L05", "HV1007", "H1007", 50);
  pipe("L06", "H1007", "OPC-HM-OUT", 50);
  pipe("L07", "T4750", "PCV4750", 50);
  pipe("L08", "PCV4750", "OPC-VENT", 50);
  pipe("L09", "T4750", "P4712", 80);
  pipe("L10", "P4712", "HV4712", 80);
  pipe("L11", "HV4712", "OPC-PRODUCT", 80);
  pipe("L12", "HV4712", "TCV4750", 50);
  pipe("L13", "TCV4750", "H1008", 50);
  pipe("L14", "H1008", "T4750", 50);
  pipe("L15", "OPC-CW-IN", "HV1008", 50);
  pipe("L16", "HV1008", "H1008", 50);
  pipe("L17", "H1008", "OPC-CW-OUT", 50);
  pipe("L18", "T4750", "PSV4750", 50);
  pipe("L19", "PSV4750", "OPC-FLARE", 80);

  signal("S01", "P4711", "PI4711");
  signal("S02", "H1007", "TI1007");
  signal("S03", "T4750", "PT4750");
  signal("S04", "PT4750", "PIC4750");
  signal("S05", "PIC4750", "PCV4750-A");
  signal("S06", "PCV4750-A", "PCV4750");
  signal("S07", "T4750", "TT4750");
  signal("S08", "TT4750", "TIC4750");
  signal("S09", "TIC4750", "TCV4750-A");
  signal("S10", "TCV4750-A", "TCV4750");
  signal("S11", "P4712", "PI4712");
  signal("S12", "HV4712", "FT4712");
  signal("S13", "FT4712", "FIC4712");
  signal("S14", "H1008", "TI1008");
  signal("S15", "H1008", "PI1008");
  signal("S16", "T4750", "PI4750");
  signal("S17", "PIC4750", "P4712");  // high-pressure pump trip
  return g;
}

}  // namespace pidlint
