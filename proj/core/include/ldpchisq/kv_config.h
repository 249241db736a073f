// Copyright 2026 The ldpchisq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPCHISQ_KV_CONFIG_H_
#define LDPCHISQ_KV_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ldpchisq {

// Flat key=value configuration text: one pair per line, '#' comments and
// blank lines ignored. Throws ConfigError for unknown or duplicate keys,
// naming the key.
std::map<std::string, std::string> parse_kv(
    std::istream& in, const std::set<std::string>& allowed_keys);

double kv_double(const std::map<std::string, std::string>& kv,
                 const std::string& key, double fallback);
std::int64_t kv_int(const std::map<std::string, std::string>& kv,
                    const std::string& key, std::int64_t fallback);
std::uint64_t kv_uint64(const std::map<std::string, std::string>& kv,
                        const std::string& key, std::uint64_t fallback);
std::string kv_string(const std::map<std::string, std::string>& kv,
                      const std::string& key, const std::string& fallback);
std::vector<std::string> kv_list(const std::map<std::string, std::string>& kv,
                                 const std::string& key);
std::vector<double> kv_double_list(
    const std::map<std::string, std::string>& kv, const std::string& key);
std::vector<std::int64_t> kv_int_list(
    const std::map<std::string, std::string>& kv, const std::string& key);

}  // namespace ldpchisq

#endif  // LDPCHISQ_KV_CONFIG_H_
