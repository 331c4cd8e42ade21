// Copyright 2026 The spanparser Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPANPARSER_CONFIG_H_
#define SPANPARSER_CONFIG_H_

#include <string>
#include <vector>

#include "trainer.h"

namespace spanparser {

// Flat key=value run configuration shared by every command. Values are
// validated as they are set; unknown keys are rejected.
class RunConfig {
 public:
  void Set(const std::string &key, const std::string &value);
  std::string Get(const std::string &key) const;

  // Reads "key = value" lines; blank lines and lines starting with '#' are
  // ignored.
  void LoadFile(const std::string &path);

  // Every key with its current value, one "key=value" per line.
  std::string Describe() const;

  static const std::vector<std::string> &Keys();

  const TrainConfig &train() const { return train_; }
  const std::string &train_path() const { return train_path_; }
  const std::string &dev_path() const { return dev_path_; }
  const std::string &model_path() const { return model_path_; }
  const std::string &metrics_path() const { return metrics_path_; }

 private:
  TrainConfig train_;
  std::string train_path_;
  std::string dev_path_;
  std::string model_path_;
  std::string metrics_path_;
};

}  // namespace spanparser

#endif  // SPANPARSER_CONFIG_H_
