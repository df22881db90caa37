// Copyright 2026 The mbgen Authors.
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

#ifndef MBGEN_RUNTIME_H_
#define MBGEN_RUNTIME_H_

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace mbgen {

// Keeps large network buffers on the heap instead of fresh mmap pages; the
// per-update temporaries otherwise page-fault on every allocation.
inline void ConfigureAllocator() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
#endif
}

}  // namespace mbgen

#endif  // MBGEN_RUNTIME_H_
