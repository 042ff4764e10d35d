import { ApiClient } from "./api.js";
import { ViewerView } from "./view.js";

const params = new URLSearchParams(window.location.search);
const serviceUrl = params.get("service") ?? "http://127.0.0.1:8765";

const root = document.getElementById("app");
if (root) {
  const view = new ViewerView(root, window.localStorage, new ApiClient(serviceUrl));
  void view.init();
}
