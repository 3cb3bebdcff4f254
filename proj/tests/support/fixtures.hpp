#pragma once

// Hand-built model fixtures shared across the test binaries.
//
// kCleanFixture exercises every entity kind and all seven link kinds and
// lints with zero findings; each mutate_* helper below changes it in exactly
// one way so that exactly one rule (R10 necessarily drags R7 along) fires.

#include <stdexcept>
#include <string>

namespace fixtures {

inline const char* kCleanFixture = R"(// Braking-system requirements model.
requirement AR-1 : acquirer {
  text: "The train shall stop within the safe braking distance."
  source: "operator workshop"
}
requirement AR-2 : acquirer {
  text: "The train shall operate unattended on line 4."
  source: "concession contract"
  parent: AR-1
}
requirement OSR-1 : stakeholder {
  text: "Maintenance staff shall be able to isolate the brake system."
  source: "maintenance dept interview"
}
requirement STR-1 : technical {
  text: "Emergency braking shall reach 1.2 m/s2 mean deceleration."
  source: "braking analysis note"
  safety: true
  criticality: high
  sil: 3
  mtbf_hours: 20000
  failure_rate_per_hour: 0.00005
}
requirement STR-2 : technical {
  text: "Brake isolation shall be operable from the cab."
  source: "braking analysis note"
}
requirement SR-1 : specified {
  text: "The brake control unit shall trigger emergency braking within 200 ms."
  source: "subsystem specification"
  safety: true
  criticality: catastrophic
  sil: 4
  mtbr_hours: 4
}
element F-1 : logical {
  name: "braking function"
}
element C-1 : physical {
  name: "brake control unit"
}
element C-2 : physical {
  name: "traction inverter"
}
element IF-1 : interface {
  name: "brake-traction bus"
  connects: [C-1, C-2]
}
testcase TC-1 {
  method: test
  description: "emergency stop on the test ring"
}
testcase TC-2 {
  method: simulation
  description: "braking model at line speed"
}
testcase TC-3 {
  method: review
}
risk RK-1 {
  description: "Train overruns the danger point."
  severity: hazardous
  likelihood: remote
  tolerability: tolerable
}
link derive AR-1 -> STR-1
link derive AR-2 -> STR-2
link derive OSR-1 -> STR-2
link derive STR-1 -> SR-1
link refine AR-1 -> AR-2
link satisfy F-1 -> STR-1
link satisfy C-1 -> STR-2
link verify TC-1 -> STR-1
link verify TC-1 -> STR-2
link verify TC-2 -> SR-1
link verify TC-3 -> AR-1
link verify TC-3 -> AR-2
link verify TC-3 -> OSR-1
link specify SR-1 -> C-1
link allocate F-1 -> C-1
link covers STR-1 -> RK-1
)";

/// Three-hop chain used by the impact examples: a requirement, the technical
/// requirement derived from it, a satisfying element, and a verifying test.
inline const char* kChainFixture = R"(requirement AR-1 : acquirer {
  text: "The system shall stop on command."
  source: "operations"
}
requirement STR-1 : technical {
  text: "Braking distance below 800 m at full speed."
}
element C-1 : physical {
  name: "brake unit"
}
testcase TC-1 {
  method: test
}
link derive AR-1 -> STR-1
link satisfy C-1 -> STR-1
link verify TC-1 -> STR-1
)";

/// Safety requirement covering a risk; used for covers-propagation checks.
inline const char* kCoversFixture = R"(requirement STR-9 : technical {
  text: "Door interlock prevents motion with doors open."
  safety: true
  criticality: catastrophic
}
risk RK-1 {
  description: "Passenger falls from a moving train."
  severity: catastrophic
  likelihood: remote
  tolerability: unacceptable
}
link covers STR-9 -> RK-1
)";

inline std::string replaced(std::string text, const std::string& from,
                            const std::string& to) {
  auto pos = text.find(from);
  if (pos == std::string::npos)
    throw std::logic_error("fixture fragment not found: " + from);
  text.replace(pos, from.size(), to);
  return text;
}

inline std::string without_line(const std::string& text,
                                const std::string& line) {
  return replaced(text, line + "\n", "");
}

// One mutation per rule; names say which rule the mutation trips.

inline std::string mutated_r1_missing_source() {
  return without_line(kCleanFixture, "  source: \"maintenance dept interview\"");
}

inline std::string mutated_r2_untransformed() {
  return without_line(kCleanFixture, "link derive AR-2 -> STR-2");
}

inline std::string mutated_r3_unsatisfied() {
  return without_line(kCleanFixture, "link satisfy C-1 -> STR-2");
}

inline std::string mutated_r4_unverified() {
  return without_line(kCleanFixture, "link verify TC-3 -> OSR-1");
}

inline std::string mutated_r5_uncovered_risk() {
  return std::string(kCleanFixture) +
         "risk RK-2 {\n"
         "  description: \"Brakes overheat on long grades.\"\n"
         "  severity: major\n"
         "  likelihood: probable\n"
         "  tolerability: tolerable\n"
         "}\n";
}

inline std::string mutated_r6_ungrounded_safety() {
  return replaced(kCleanFixture,
                  "  text: \"Brake isolation shall be operable from the cab.\"\n",
                  "  text: \"Brake isolation shall be operable from the cab.\"\n"
                  "  safety: true\n"
                  "  criticality: medium\n");
}

inline std::string mutated_r7_bad_link() {
  return std::string(kCleanFixture) + "link satisfy C-1 -> AR-1\n";
}

inline std::string mutated_r8_derivation_cycle() {
  return std::string(kCleanFixture) + "link refine AR-2 -> AR-1\n";
}

inline std::string mutated_r9_dangling_interface() {
  return replaced(kCleanFixture, "  connects: [C-1, C-2]", "  connects: [C-1]");
}

/// Trips both R10 and, unavoidably, R7: any link that misuses a test case or
/// risk also falls outside the link-constraint table.
inline std::string mutated_r10_concept_mix() {
  return std::string(kCleanFixture) + "link allocate TC-1 -> RK-1\n";
}

inline std::string mutated_r11_criticality_drop() {
  return replaced(kCleanFixture, "  criticality: catastrophic",
                  "  criticality: low");
}

inline std::string mutated_r12_unallocated() {
  return without_line(kCleanFixture, "link allocate F-1 -> C-1");
}

}  // namespace fixtures
