#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "pdtk/colored.hpp"
#include "pdtk/machine.hpp"

namespace pdtk {

class MachineFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyMachine = std::variant<Transducer, ColoredAutomaton>;

// Kind comes from an explicit "kind" key, else from the presence of colors/partition.
AnyMachine parse_machine(std::string_view text);
Transducer parse_transducer(std::string_view text);
ColoredAutomaton parse_colored(std::string_view text);

std::string serialize(const Transducer& t);
std::string serialize(const ColoredAutomaton& m);
std::string serialize(const AnyMachine& m);

AnyMachine load_machine(const std::filesystem::path& path);
void save_machine(const std::filesystem::path& path, const AnyMachine& m);

}  // namespace pdtk
