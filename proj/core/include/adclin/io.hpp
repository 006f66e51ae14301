#pragma once

#include <adclin/linearizer.hpp>
#include <adclin/metrics.hpp>
#include <adclin/signal.hpp>

#include <map>
#include <string>
#include <vector>

namespace adclin {

// 17 significant digits; round-trips through parsing exactly.
std::string format_double(double value);

// Signal CSV: optional '#' comment lines, header "n,value", rows n = 1..L.
void write_signal_csv(const std::string& path, const Signal& s, const std::string& comment);
Signal read_signal_csv(const std::string& path);

// Spectrum CSV: header "omega_over_pi,power_db".
void write_spectrum_csv(const std::string& path, const Spectrum& spec, const std::string& comment);

// Generic CSV with one comment line, a header row, and string cells.
void write_table_csv(const std::string& path, const std::string& comment,
                     const std::string& header, const std::vector<std::vector<std::string>>& rows);

// Linearizer persistence: "key = value" text with kind/N/activation and the
// coefficient lists; round-trips exactly.
void save_linearizer(const std::string& path, const LinearizerVariant& lin);
LinearizerVariant load_linearizer(const std::string& path);

// "key = value" file parsing shared by config files and manifests. '#' lines
// and blank lines are skipped; later keys override earlier ones.
std::map<std::string, std::string> parse_kv_text(const std::string& text);
std::map<std::string, std::string> parse_kv_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace adclin
