//  Copyright 2026 The musicvec Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#ifndef MUSICVEC_MUSICVEC_HPP
#define MUSICVEC_MUSICVEC_HPP

#include "musicvec/corpus.hpp"
#include "musicvec/embedding.hpp"
#include "musicvec/embedding_io.hpp"
#include "musicvec/error.hpp"
#include "musicvec/eval.hpp"
#include "musicvec/metrics.hpp"
#include "musicvec/negative_table.hpp"
#include "musicvec/synthetic.hpp"
#include "musicvec/tokenizer.hpp"
#include "musicvec/trainer.hpp"
#include "musicvec/tsne.hpp"
#include "musicvec/vocabulary.hpp"

#endif  // MUSICVEC_MUSICVEC_HPP
